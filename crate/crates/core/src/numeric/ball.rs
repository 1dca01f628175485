use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;
use crate::exact::{QuadSurd, Rational};

/// Extra bits carried by fixed-point series evaluations.
const GUARD: u32 = 24;

/// A real ball: midpoint mid·2^exp with radius `rad`.
///
/// The midpoint keeps at most `prec` significant bits. Every operation
/// returns a ball containing the exact result for all inputs drawn from
/// the operand balls.
#[derive(Clone, Debug)]
pub struct BigReal {
    mid: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal { mid: BigInt::zero(), exp: 0, rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    /// Ball of unbounded radius around zero.
    pub fn indeterminate(prec: u32) -> Self {
        BigReal { mid: BigInt::zero(), exp: 0, rad: Mag::INF, prec }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u32) -> Self {
        BigReal { mid: n.into(), exp: 0, rad: Mag::ZERO, prec }.rounded()
    }

    /// Exact value m·2^e, rounded to `prec` bits.
    pub fn from_parts(mid: BigInt, exp: i64, prec: u32) -> Self {
        BigReal { mid, exp, rad: Mag::ZERO, prec }.rounded()
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite input {x}");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::from_parts(BigInt::from(man) * sign, exp, prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let num = Self::from_int(q.numer().clone(), prec + 8);
        if q.denom().is_one() {
            return num.with_prec(prec);
        }
        let den = Self::from_int(q.denom().clone(), prec + 8);
        num.div(&den).with_prec(prec)
    }

    pub fn from_surd(z: &QuadSurd, prec: u32) -> Self {
        let wp = prec + 16;
        let a = Self::from_rational(z.a(), wp);
        if z.is_rational() {
            return a.with_prec(prec);
        }
        let root = Self::from_int(z.radicand(), wp).sqrt();
        let b = Self::from_rational(z.b(), wp);
        a.add(&b.mul(&root)).with_prec(prec)
    }

    pub fn with_rad(mut self, extra: Mag) -> Self {
        self.rad = self.rad.add_up(extra);
        self
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.rounded()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn mid(&self) -> BigReal {
        BigReal { mid: self.mid.clone(), exp: self.exp, rad: Mag::ZERO, prec: self.prec }
    }

    /// Midpoint as an exact rational.
    pub fn mid_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mid << self.exp as usize)
        } else {
            Rational::new(self.mid.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.rad.is_inf()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// True when the radius reaches half the midpoint's magnitude.
    pub fn is_unresolved(&self) -> bool {
        if !self.is_finite() {
            return true;
        }
        if self.rad.is_zero() {
            return false;
        }
        self.rad.mul_2exp(1) >= Mag::from_bigint_down(&self.mid, self.exp)
    }

    fn rounded(mut self) -> Self {
        let bits = self.mid.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            let (q, r) = self.mid.div_mod_floor(&(BigInt::one() << shift));
            // round to nearest; error at most half an ulp, bounded by one
            let half = BigInt::one() << (shift - 1);
            self.mid = if r >= half { q + 1 } else { q };
            self.exp += shift as i64;
            self.rad = self.rad.add_up(Mag::pow2(self.exp - 1));
        }
        if self.mid.is_zero() {
            self.exp = 0;
        } else {
            let tz = self.mid.trailing_zeros().unwrap_or(0);
            if tz > 0 {
                self.mid >>= tz as usize;
                self.exp += tz as i64;
            }
        }
        self
    }

    fn mid_mag_up(&self) -> Mag {
        Mag::from_bigint_up(&self.mid, self.exp)
    }

    fn mid_mag_down(&self) -> Mag {
        Mag::from_bigint_down(&self.mid, self.exp)
    }

    /// Upper bound for |x| over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid_mag_up().add_up(self.rad)
    }

    /// Lower bound for |x| over the ball.
    pub fn abs_lower(&self) -> Mag {
        self.mid_mag_down().sub_down(self.rad)
    }

    /// Binary exponent of the leading midpoint bit.
    fn mid_top(&self) -> i64 {
        if self.mid.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + self.mid.bits() as i64
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && !self.contains_zero()
    }

    /// Sign of every point in the ball, if they agree.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Radius is below 2^-bits relative to the midpoint.
    pub fn has_rel_accuracy(&self, bits: u32) -> bool {
        if self.mid.is_zero() {
            return self.rad.is_zero();
        }
        self.rad.top() <= self.mid_top() - 1 - bits as i64
    }

    /// Number of correct bits in the midpoint, relative to its size.
    pub fn rel_accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return self.prec as i64;
        }
        if self.mid.is_zero() {
            return i64::MIN / 4;
        }
        self.mid_top() - self.rad.top()
    }

    /// True when the balls intersect.
    pub fn overlaps(&self, other: &BigReal) -> bool {
        let d = self.mid().sub(&other.mid());
        d.abs_lower() <= self.rad.add_up(other.rad)
    }

    /// Upper bound for |self - other| over both balls.
    pub fn dist_upper(&self, other: &BigReal) -> Mag {
        self.sub(other).abs_upper()
    }

    pub fn neg(&self) -> Self {
        BigReal { mid: -&self.mid, exp: self.exp, rad: self.rad, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &BigReal) -> Self {
        let prec = self.prec.max(other.prec);
        let rad = self.rad.add_up(other.rad);
        if other.mid.is_zero() {
            return BigReal { mid: self.mid.clone(), exp: self.exp, rad, prec }.rounded();
        }
        if self.mid.is_zero() {
            return BigReal { mid: other.mid.clone(), exp: other.exp, rad, prec }.rounded();
        }
        let (ta, tb) = (self.mid_top(), other.mid_top());
        let slack = prec as i64 + 8;
        if ta > tb + slack && self.exp > tb {
            let rad = rad.add_up(other.mid_mag_up());
            return BigReal { mid: self.mid.clone(), exp: self.exp, rad, prec }.rounded();
        }
        if tb > ta + slack && other.exp > ta {
            let rad = rad.add_up(self.mid_mag_up());
            return BigReal { mid: other.mid.clone(), exp: other.exp, rad, prec }.rounded();
        }
        let e = self.exp.min(other.exp);
        let mid = (&self.mid << (self.exp - e) as usize) + (&other.mid << (other.exp - e) as usize);
        BigReal { mid, exp: e, rad, prec }.rounded()
    }

    pub fn sub(&self, other: &BigReal) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigReal) -> Self {
        let prec = self.prec.max(other.prec);
        let rad = self
            .mid_mag_up()
            .mul_up(other.rad)
            .add_up(other.mid_mag_up().mul_up(self.rad))
            .add_up(self.rad.mul_up(other.rad));
        BigReal { mid: &self.mid * &other.mid, exp: self.exp + other.exp, rad, prec }.rounded()
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let m = Mag::from_u64_up(n.unsigned_abs());
        BigReal { mid: &self.mid * n, exp: self.exp, rad: self.rad.mul_up(m), prec: self.prec }.rounded()
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let n = Self::from_int(q.numer().clone(), self.prec + 8);
        let out = self.mul(&n);
        if q.denom().is_one() {
            out.with_prec(self.prec)
        } else {
            out.div(&Self::from_int(q.denom().clone(), self.prec + 8)).with_prec(self.prec)
        }
    }

    /// Exact scaling by 2^e.
    pub fn mul_2exp(&self, e: i64) -> Self {
        if self.mid.is_zero() {
            return BigReal { rad: self.rad.mul_2exp(e), ..self.clone() };
        }
        BigReal { mid: self.mid.clone(), exp: self.exp + e, rad: self.rad.mul_2exp(e), prec: self.prec }
    }

    pub fn div(&self, other: &BigReal) -> Self {
        let prec = self.prec.max(other.prec);
        let lower = other.abs_lower();
        if lower.is_zero() {
            return Self::indeterminate(prec);
        }
        if self.mid.is_zero() {
            return BigReal { mid: BigInt::zero(), exp: 0, rad: self.rad.div_up(lower), prec };
        }
        let shift = (prec as i64 + 2 + other.mid.bits() as i64 - self.mid.bits() as i64).max(0);
        let q = (&self.mid << shift as usize) / &other.mid;
        let qexp = self.exp - other.exp - shift;
        // truncation contributes at most one unit in the last place
        let q_mag = Mag::from_bigint_up(&q, qexp).add_up(Mag::pow2(qexp));
        let rad = self.rad.add_up(q_mag.mul_up(other.rad)).div_up(lower).add_up(Mag::pow2(qexp));
        BigReal { mid: q, exp: qexp, rad, prec }.rounded()
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec).div(self)
    }

    pub fn div_int(&self, n: i64) -> Self {
        self.div(&Self::from_int(n, self.prec + 8))
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Self::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Square root; the ball is intersected with [0, ∞) first.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec;
        if self.mid.is_negative() && !self.contains_zero() {
            return Self::indeterminate(prec);
        }
        if self.contains_zero() {
            let up = self.abs_upper();
            let root = mag_sqrt_up(up);
            return BigReal { mid: BigInt::zero(), exp: 0, rad: root, prec };
        }
        let mut s = (2 * prec as i64 + 4 - self.mid.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let r = (&self.mid << s as usize).sqrt();
        let rexp = (self.exp - s) / 2;
        let root_lower = Mag::from_bigint_down(&r, rexp);
        let rad = self.rad.div_up(root_lower).add_up(Mag::pow2(rexp));
        BigReal { mid: r, exp: rexp, rad, prec }.rounded()
    }

    /// Midpoint in fixed point with `f` fractional bits, truncated.
    fn fixed_mid(&self, f: u32) -> BigInt {
        let shift = self.exp + f as i64;
        if shift >= 0 {
            &self.mid << shift as usize
        } else {
            let d = &self.mid >> (-shift) as usize;
            // arithmetic shift floors; keep truncation toward zero symmetric
            if self.mid.is_negative() && (&d << (-shift) as usize) != self.mid {
                d + 1
            } else {
                d
            }
        }
    }

    pub fn pi(prec: u32) -> Self {
        static CACHE: Mutex<Option<BigReal>> = Mutex::new(None);
        cached_constant(&CACHE, prec, compute_pi)
    }

    pub fn ln2(prec: u32) -> Self {
        static CACHE: Mutex<Option<BigReal>> = Mutex::new(None);
        cached_constant(&CACHE, prec, compute_ln2)
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// (sin x, cos x) with argument reduction by multiples of π/2.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        if !self.is_finite() || self.rad.top() > 2 {
            let unit = BigReal { mid: BigInt::zero(), exp: 0, rad: Mag::pow2(0), prec };
            return (unit.clone(), unit);
        }
        let (r, quadrant) = if self.mid_top() <= -1 {
            (self.clone(), 0u8)
        } else {
            let qbits = (self.mid_top().max(0) + 4) as u32;
            let wp = prec + qbits + GUARD;
            let half_pi = Self::pi(wp).mul_2exp(-1);
            let x = self.clone().with_prec_keep(wp);
            let t = x.mid().div(&half_pi);
            let q = t.round_mid();
            let r = x.sub(&half_pi.mul(&Self::from_int(q.clone(), wp)));
            let quadrant = q.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
            (r, quadrant)
        };
        let wp = prec + GUARD;
        let (s, c) = sin_cos_small(&r.mid().with_prec_keep(wp + r.mid.bits() as u32), wp);
        // both functions are 1-Lipschitz
        let s = s.with_rad(r.rad).with_prec(prec);
        let c = c.with_rad(r.rad).with_prec(prec);
        match quadrant {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }

    /// Same value with a new precision, without rounding the midpoint.
    fn with_prec_keep(mut self, prec: u32) -> Self {
        self.prec = prec.max(self.prec);
        self
    }

    /// Midpoint rounded to the nearest integer.
    fn round_mid(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mid << self.exp as usize;
        }
        let sh = (-self.exp) as usize;
        let half = BigInt::one() << (sh - 1);
        (&self.mid + half) >> sh
    }

    /// Floor of every point in the ball, if they agree.
    pub fn floor_exact(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        let m = self.mid_rational();
        let r = Self::from_mag(self.rad, 64).mid_rational();
        let lo = (&m - &r).floor().to_integer();
        let hi = (&m + &r).floor().to_integer();
        (lo == hi).then_some(lo)
    }

    /// Exact ball with midpoint equal to the magnitude value.
    pub fn from_mag(m: Mag, prec: u32) -> Self {
        if m.is_inf() {
            return Self::indeterminate(prec);
        }
        let (man, exp) = m.parts();
        BigReal { mid: BigInt::from(man), exp, rad: Mag::ZERO, prec }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if !self.is_finite() {
            return Self::indeterminate(prec);
        }
        if self.mid_top() > 40 {
            if self.mid.is_negative() && self.rad.top() < 0 {
                // e^x underflows below anything representable in practice
                let tiny = Mag::pow2(-(1i64 << 40));
                return BigReal { mid: BigInt::zero(), exp: 0, rad: tiny, prec };
            }
            return Self::indeterminate(prec);
        }
        let nbits = (self.mid_top().max(0) + 2) as u32;
        let wp = prec + nbits + GUARD;
        let ln2 = Self::ln2(wp);
        let x = self.mid().with_prec_keep(wp);
        let n = x.div(&ln2).round_mid();
        let r = x.sub(&ln2.mul(&Self::from_int(n.clone(), wp)));
        let n = n.to_i64().expect("exponent range checked above");
        // e^(r+δ) lies within e^r·(1 ± 2|δ|) for |δ| <= 1
        let delta = r.rad.add_up(self.rad);
        if delta.top() > 0 {
            return Self::indeterminate(prec);
        }
        let e = exp_small(&r.mid(), wp);
        let grow = e.abs_upper().mul_up(delta.mul_2exp(1));
        e.with_rad(grow).mul_2exp(n).with_prec(prec)
    }

    /// Natural logarithm; indeterminate unless the ball is positive.
    pub fn ln(&self) -> Self {
        let prec = self.prec;
        if !self.is_positive() || !self.is_finite() {
            return Self::indeterminate(prec);
        }
        let wp = prec + GUARD + 8;
        let b = self.mid.bits() as i64;
        let mut e2 = self.exp + b - 1;
        // m in [1, 2) as a fixed-point number with wp fractional bits
        let mut m = if b - 1 <= wp as i64 {
            &self.mid << (wp as i64 - (b - 1)) as usize
        } else {
            &self.mid >> ((b - 1) - wp as i64) as usize
        };
        let mut m_inexact = b - 1 > wp as i64;
        let one = BigInt::one() << wp as usize;
        // keep m within [1/√2, √2): compare m² with 2·one²
        if (&m * &m) > (&one * &one) * 2 {
            m_inexact |= m.is_odd();
            m >>= 1;
            e2 += 1;
        }
        let y = ((&m - &one) << wp as usize) / (&m + &one);
        let y2 = (&y * &y) >> wp as usize;
        let mut pow = y.clone();
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !pow.is_zero() {
            sum += &pow / (2 * k + 1);
            pow = shr_trunc(&pow * &y2, wp);
            k += 1;
        }
        let sum = sum << 1;
        let err_ulps = 6 * k + 16 + if m_inexact { 4 } else { 0 };
        let ln_m =
            BigReal { mid: sum, exp: -(wp as i64), rad: Mag::from_u64_up(err_ulps).mul_2exp(-(wp as i64)), prec: wp };
        let mut out = ln_m.add(&Self::ln2(wp + 64).mul(&Self::from_int(e2, wp)));
        if !self.rad.is_zero() {
            out = out.with_rad(self.rad.div_up(self.abs_lower()));
        }
        out.with_prec(prec)
    }

    /// x^y for x > 0 and real y.
    pub fn pow(&self, y: &BigReal) -> Self {
        if y.is_exact() && y.exp >= 0 {
            if let Some(n) = (&y.mid << y.exp as usize).to_i64() {
                return self.powi(n);
            }
        }
        let wp = self.prec.max(y.prec) + 16;
        let l = self.clone().with_prec_keep(wp).ln();
        l.mul(&y.clone().with_prec_keep(wp)).exp().with_prec(self.prec.max(y.prec))
    }

    pub fn to_f64(&self) -> f64 {
        if self.mid.is_zero() {
            return 0.0;
        }
        let b = self.mid.bits() as i64;
        let (top, shift) = if b > 60 { (&self.mid >> (b - 60) as usize, b - 60) } else { (self.mid.clone(), 0) };
        let t = top.to_f64().unwrap_or(0.0);
        let e = (self.exp + shift).clamp(-1100, 1100) as i32;
        t * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    /// Decimal midpoint with `digits` significant digits, e.g. `-1.2345e-3`.
    pub fn mid_to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.mid.is_zero() {
            return "0".to_string();
        }
        let neg = self.mid.is_negative();
        let q = self.mid_rational().abs();
        let l2 = self.mid.bits() as f64 - 1.0 + self.exp as f64;
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let scaled = |e10: i64| -> BigInt {
            let k = digits as i64 - 1 - e10;
            let v = if k >= 0 {
                &q * Rational::from_integer(ten.pow(k as u32))
            } else {
                &q / Rational::from_integer(ten.pow((-k) as u32))
            };
            v.round().to_integer()
        };
        let mut n = scaled(e10);
        let lim = ten.pow(digits as u32);
        let low = ten.pow(digits as u32 - 1);
        if n >= lim {
            e10 += 1;
            n = scaled(e10);
        } else if n < low {
            e10 -= 1;
            n = scaled(e10);
        }
        if n >= lim {
            // rounding carried into a new digit, e.g. 9.99 -> 10.0
            e10 += 1;
            n = &n / 10;
        }
        let s = n.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// Decimal digits that the radius allows, capped by the precision.
    pub fn reliable_digits(&self) -> usize {
        let cap = (self.prec as f64 * std::f64::consts::LOG10_2) as usize;
        if self.rad.is_zero() {
            return cap.max(1);
        }
        let bits = self.rel_accuracy_bits();
        if bits <= 0 {
            return 1;
        }
        ((bits as f64 * std::f64::consts::LOG10_2) as usize).clamp(1, cap.max(1))
    }

    /// Midpoint string with the given digits followed by `± radius`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!("{} ± {}", self.mid_to_decimal(digits), self.rad)
    }
}

/// x / 2^n rounded toward zero.
fn shr_trunc(x: BigInt, n: u32) -> BigInt {
    if x.is_negative() {
        -((-x) >> n as usize)
    } else {
        x >> n as usize
    }
}

fn mag_sqrt_up(m: Mag) -> Mag {
    if m.is_zero() || m.is_inf() {
        return m;
    }
    let (man, mut exp) = m.parts();
    let mut man = man as f64;
    if exp % 2 != 0 {
        man *= 2.0;
        exp -= 1;
    }
    Mag::from_f64_up(man.sqrt() * (1.0 + 1e-12)).mul_2exp(exp / 2)
}

fn cached_constant(cache: &Mutex<Option<BigReal>>, prec: u32, compute: fn(u32) -> BigReal) -> BigReal {
    let mut guard = cache.lock().expect("constant cache poisoned");
    if let Some(c) = guard.as_ref() {
        if c.prec >= prec {
            return c.clone().with_prec(prec);
        }
    }
    let target = prec.max(guard.as_ref().map_or(0, |c| c.prec + c.prec / 2));
    let value = compute(target);
    *guard = Some(value.clone());
    value.with_prec(prec)
}

/// arctan(1/n) in fixed point with `f` fractional bits; returns the value
/// and the number of truncated terms.
fn atan_inv_fixed(n: u64, f: u32) -> (BigInt, u64) {
    let n2 = BigInt::from(n * n);
    let mut pow = (BigInt::one() << f as usize) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        let term = &pow / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        pow /= &n2;
        k += 1;
    }
    (sum, k)
}

fn compute_pi(prec: u32) -> BigReal {
    let f = prec + GUARD;
    let (a, ka) = atan_inv_fixed(5, f);
    let (b, kb) = atan_inv_fixed(239, f);
    let mid = (a * 16) - (b * 4);
    let err = 16 * (4 * ka + 4) + 4 * (4 * kb + 4);
    BigReal { mid, exp: -(f as i64), rad: Mag::from_u64_up(err).mul_2exp(-(f as i64)), prec }.rounded()
}

fn compute_ln2(prec: u32) -> BigReal {
    // ln 2 = 2 atanh(1/3)
    let f = prec + GUARD;
    let mut pow: BigInt = (BigInt::one() << f as usize) / 3;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        sum += &pow / (2 * k + 1);
        pow /= 9;
        k += 1;
    }
    BigReal { mid: sum << 1, exp: -(f as i64), rad: Mag::from_u64_up(8 * k + 8).mul_2exp(-(f as i64)), prec }.rounded()
}

/// sin and cos of an exact point with |x| <= 1, working with `wp` bits.
fn sin_cos_small(x: &BigReal, wp: u32) -> (BigReal, BigReal) {
    debug_assert!(x.is_exact());
    if x.mid.is_zero() {
        return (BigReal::zero(wp), BigReal::one(wp));
    }
    let f = wp + 8;
    // u = x² in fixed point, truncated (error below one ulp)
    let x2 = BigReal { mid: &x.mid * &x.mid, exp: 2 * x.exp, rad: Mag::ZERO, prec: u32::MAX };
    let u = x2.fixed_mid(f);
    let one = BigInt::one() << f as usize;
    // S(u) = Σ (-u)^n/(2n+1)!, C(u) = Σ (-u)^n/(2n)!; each loop step
    // truncates at most twice, and the terms decrease so errors stay put.
    let mut s_term = one.clone();
    let mut c_term = one.clone();
    let mut s_sum = one.clone();
    let mut c_sum = one.clone();
    let mut n = 1u64;
    loop {
        s_term = ((&s_term * &u) >> f as usize) / ((2 * n) * (2 * n + 1));
        c_term = ((&c_term * &u) >> f as usize) / ((2 * n - 1) * (2 * n));
        if s_term.is_zero() && c_term.is_zero() {
            break;
        }
        if n % 2 == 1 {
            s_sum -= &s_term;
            c_sum -= &c_term;
        } else {
            s_sum += &s_term;
            c_sum += &c_term;
        }
        n += 1;
    }
    // truncation per step plus the error in u, which moves the sums by at
    // most |S'|,|C'| <= 1 ulp each
    let err = Mag::from_u64_up(2 * n + 4).mul_2exp(-(f as i64));
    let s = BigReal { mid: s_sum, exp: -(f as i64), rad: err, prec: wp };
    let c = BigReal { mid: c_sum, exp: -(f as i64), rad: err, prec: wp }.rounded();
    let sx = x.clone().with_prec_keep(wp).mul(&s);
    (sx, c)
}

/// e^r for an exact point with |r| <= 1.
fn exp_small(r: &BigReal, wp: u32) -> BigReal {
    let f = wp + 8;
    let rf = r.fixed_mid(f);
    let one = BigInt::one() << f as usize;
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1u64;
    loop {
        term = shr_trunc(&term * &rf, f) / k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    let err = Mag::from_u64_up(2 * k + 4).mul_2exp(-(f as i64));
    BigReal { mid: sum, exp: -(f as i64), rad: err, prec: wp }.rounded()
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.reliable_digits().min(40));
        f.write_str(&self.to_decimal_string(digits))
    }
}
