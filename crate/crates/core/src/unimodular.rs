//! The polynomial family
//!
//!   Σ_{m=0}^{k} 2^m(2^m − 2) B_m E_{k−m} C(k, m) (x − x^m)(1 + x)^{k−m}
//!
//! and numerical verification that its zeros lie on the unit circle.
//!
//! Roots are seeded by Aberth iteration in double precision, polished by
//! Aberth iteration in ball arithmetic, and enclosed with Smith's disks
//! |z − z_i| ≤ n|p(z_i)/(a_n Π_{j≠i}(z_i − z_j))|.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diophantine::digits_to_bits;
use crate::exact::{bernoulli, binomial, euler_number, Rational};
use crate::numeric::{BigReal, Mag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnimodularError {
    #[error("k = {0} must be even and at least 2")]
    BadIndex(u64),
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("polynomial of degree {0} has no roots to locate")]
    Constant(usize),
    #[error("root iteration did not converge at {bits} bits; increase the precision")]
    NoConvergence { bits: u32 },
}

/// Integer polynomial, coefficients lowest degree first, stored primitive
/// with a positive leading coefficient.
///
/// The rational polynomial it came from equals (content/scale)·Σ cᵢxⁱ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    scale: BigInt,
    content: BigInt,
}

impl IntPolynomial {
    pub fn new<T: Into<BigInt>, I: IntoIterator<Item = T>>(coeffs: I) -> Result<Self, UnimodularError> {
        let c: Vec<Rational> = coeffs.into_iter().map(|x| Rational::from_integer(x.into())).collect();
        Self::from_rational(&c)
    }

    /// Clears denominators and content of a rational polynomial.
    pub fn from_rational(coeffs: &[Rational]) -> Result<Self, UnimodularError> {
        let mut c = coeffs.to_vec();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            return Err(UnimodularError::ZeroPolynomial);
        }
        let scale = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&scale / x.denom())).collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().is_some_and(|x| x.is_negative()) {
            content = -content;
        }
        let coeffs = ints.iter().map(|x| x / &content).collect();
        Ok(IntPolynomial { coeffs, scale, content })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn content(&self) -> &BigInt {
        &self.content
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show = !a.is_one() || i == 0;
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

// dense polynomials over ℚ, lowest degree first, no trailing zeros

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn derivative(a: &[Rational]) -> Vec<Rational> {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: Vec<Rational>) -> Vec<Rational> {
    match a.last().cloned() {
        Some(l) => a.into_iter().map(|c| c / &l).collect(),
        None => a,
    }
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Degree of gcd(p, p') over 𝔽_ℓ, or None when ℓ divides a denominator or
/// the leading coefficient.
fn derivative_gcd_degree_mod(p: &[Rational]) -> Option<usize> {
    let modulus = BigInt::from(PRIME);
    let reduce = |c: &Rational| -> Option<u64> {
        let d = c.denom().mod_floor(&modulus).to_u64()?;
        if d == 0 {
            return None;
        }
        let n = c.numer().mod_floor(&modulus).to_u64()?;
        Some(mulmod(n, powmod(d, PRIME - 2)))
    };
    let a: Vec<u64> = p.iter().map(reduce).collect::<Option<_>>()?;
    if *a.last()? == 0 {
        return None;
    }
    let b: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % PRIME)).collect();
    let strip = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut x, mut y) = (a, strip(b));
    while !y.is_empty() {
        let inv = powmod(*y.last().unwrap(), PRIME - 2);
        while x.len() >= y.len() {
            let shift = x.len() - y.len();
            let c = mulmod(*x.last().unwrap(), inv);
            for (i, &t) in y.iter().enumerate() {
                x[shift + i] = (x[shift + i] + PRIME - mulmod(c, t)) % PRIME;
            }
            x = strip(x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len().saturating_sub(1))
}

/// Yun's squarefree factorization: (factor, multiplicity) pairs whose
/// product, with multiplicities, is `p` up to a constant.
fn squarefree_parts(p: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    // the gcd over ℚ reduces to a divisor of the gcd mod ℓ
    if derivative_gcd_degree_mod(p) == Some(0) {
        return vec![(p.to_vec(), 1)];
    }
    let dp = derivative(p);
    let a0 = poly_gcd(p, &dp);
    let mut b = poly_divrem(p, &a0).0;
    let mut c = poly_divrem(&dp, &a0).0;
    let mut d = poly_sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = poly_gcd(&b, &d);
        b = poly_divrem(&b, &a).0;
        c = poly_divrem(&d, &a).0;
        d = poly_sub(&c, &derivative(&b));
        if a.len() > 1 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// The rational polynomial before clearing denominators.
pub fn conj_poly_rational(k: u64) -> Result<Vec<Rational>, UnimodularError> {
    if k < 2 || k % 2 == 1 {
        return Err(UnimodularError::BadIndex(k));
    }
    let one = Rational::one();
    let one_plus_x = [one.clone(), one.clone()];
    let mut powers = vec![vec![one.clone()]];
    for i in 1..=k as usize {
        powers.push(poly_mul(&powers[i - 1], &one_plus_x));
    }
    let mut acc: Vec<Rational> = Vec::new();
    for m in 0..=k {
        let two_m: BigInt = BigInt::one() << m as usize;
        let weight: BigInt = &two_m * (&two_m - 2);
        if weight.is_zero() {
            continue;
        }
        let c = bernoulli(m) * Rational::from_integer(weight * euler_number(k - m) * binomial(k, m as i64));
        if c.is_zero() {
            continue;
        }
        // x − x^m
        let mut lin = vec![Rational::zero(); (m as usize).max(1) + 1];
        lin[1] += &one;
        lin[m as usize] -= &one;
        let term = poly_mul(&trim(lin), &powers[(k - m) as usize]);
        let scaled: Vec<Rational> = term.into_iter().map(|t| t * &c).collect();
        acc = poly_sub(&acc, &scaled.iter().map(|t| -t).collect::<Vec<_>>());
    }
    Ok(acc)
}

/// Primitive integer form of the family member of index k.
pub fn conj_poly(k: u64) -> Result<IntPolynomial, UnimodularError> {
    IntPolynomial::from_rational(&conj_poly_rational(k)?)
}

/// c_i = ε·c_{n−i} for a fixed ε = ±1, after dividing out powers of x.
pub fn self_inversive_sign(p: &IntPolynomial) -> Option<i8> {
    let start = p.coeffs.iter().position(|c| !c.is_zero())?;
    let c = &p.coeffs[start..];
    let n = c.len() - 1;
    for eps in [1i8, -1] {
        if (0..=n).all(|i| c[i] == &c[n - i] * BigInt::from(eps)) {
            return Some(eps);
        }
    }
    None
}

pub fn self_inversive_check(p: &IntPolynomial) -> bool {
    self_inversive_sign(p).is_some()
}

// complex balls over BigReal

#[derive(Clone, Debug)]
struct CBall {
    re: BigReal,
    im: BigReal,
}

impl CBall {
    fn from_c64(z: Complex64, prec: u32) -> Self {
        CBall { re: BigReal::from_f64(z.re, prec), im: BigReal::from_f64(z.im, prec) }
    }

    fn real(x: BigReal) -> Self {
        let prec = x.prec();
        CBall { re: x, im: BigReal::zero(prec) }
    }

    fn mid(&self) -> Self {
        CBall { re: self.re.mid(), im: self.im.mid() }
    }

    fn add(&self, o: &CBall) -> Self {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &CBall) -> Self {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn mul(&self, o: &CBall) -> Self {
        CBall { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }

    fn norm_sqr(&self) -> BigReal {
        self.re.sqr().add(&self.im.sqr())
    }

    fn div(&self, o: &CBall) -> Self {
        let d = o.norm_sqr();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&d);
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&d);
        CBall { re, im }
    }

    fn abs(&self) -> BigReal {
        let n = self.norm_sqr();
        if n.contains_zero() {
            // |z| ≤ sqrt(upper bound)
            let up = BigReal::from_mag(n.abs_upper(), n.prec()).sqrt();
            return BigReal::zero(n.prec()).with_rad(up.abs_upper());
        }
        n.sqrt()
    }

    fn abs_upper(&self) -> Mag {
        self.abs().abs_upper()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn horner(coeffs: &[BigReal], z: &CBall) -> (CBall, CBall) {
    let prec = z.re.prec();
    let mut p = CBall::real(BigReal::zero(prec));
    let mut dp = CBall::real(BigReal::zero(prec));
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(&CBall::real(c.clone()));
    }
    (p, dp)
}

fn horner_c64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Double-precision Aberth iteration; returns the best approximations
/// reached even if the iteration cap is hit.
fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // Fujiwara-type bound for the initial circle
    let radius = (0..n).map(|i| (coeffs[i] / lead).abs().powf(1.0 / (n - i) as f64)).fold(0.0, f64::max).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_c64(coeffs, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

/// A located root with its inclusion disk.
#[derive(Debug, Clone, Serialize)]
pub struct RootEnclosure {
    /// Decimal real part of the disk center.
    pub re: String,
    /// Decimal imaginary part of the disk center.
    pub im: String,
    /// Disk radius, upper bound.
    pub radius: f64,
    pub multiplicity: usize,
    /// Upper bound for |1 − |root|| over the disk.
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitCircleReport {
    pub degree: usize,
    pub digits: u32,
    pub self_inversive: bool,
    /// Largest |1 − |root||, an upper bound over all inclusion disks.
    pub max_deviation: f64,
    /// Every disk is isolated and its deviation bound is below 10^{−digits/2}.
    pub certified: bool,
    /// Each isolated disk is disjoint from every other disk's image under
    /// z ↦ 1/z̄, which pins its root to |z| = 1 for self-inversive input.
    pub inversion_isolated: bool,
    /// Largest |p(center)| over the centers, upper bound.
    pub max_residual: f64,
    pub roots: Vec<RootEnclosure>,
}

struct Disk {
    center: CBall,
    radius: Mag,
    multiplicity: usize,
}

/// Roots of one squarefree factor with Smith disks.
fn enclose_squarefree(factor: &[Rational], prec: u32) -> Result<Vec<(CBall, Mag)>, UnimodularError> {
    let n = factor.len() - 1;
    if n == 1 {
        let root = -(&factor[0] / &factor[1]);
        return Ok(vec![(CBall::real(BigReal::from_rational(&root, prec)), Mag::ZERO)]);
    }
    // scale for f64: divide by the largest coefficient
    let big = factor.iter().map(|c| c.abs()).max().expect("nonempty");
    let cf: Vec<f64> = factor.iter().map(|c| (c / &big).to_f64().unwrap_or(0.0)).collect();
    let seeds = aberth_f64(&cf);
    let coeffs: Vec<BigReal> = factor.iter().map(|c| BigReal::from_rational(c, prec)).collect();
    let mut z: Vec<CBall> = seeds.iter().map(|&s| CBall::from_c64(s, prec)).collect();
    let target = Mag::pow2(-(prec as i64) + 16);
    let mut converged = false;
    for _ in 0..(prec as usize / 8 + 40) {
        let mut worst = Mag::ZERO;
        for i in 0..n {
            let (p, dp) = horner(&coeffs, &z[i]);
            let p = p.mid();
            if p.re.abs_upper().is_zero() && p.im.abs_upper().is_zero() {
                continue;
            }
            let ratio = p.div(&dp.mid()).mid();
            let mut s = CBall::real(BigReal::zero(prec));
            for j in (0..n).filter(|&j| j != i) {
                let one = CBall::real(BigReal::one(prec));
                s = s.add(&one.div(&z[i].sub(&z[j]).mid()).mid());
            }
            let denom = CBall::real(BigReal::one(prec)).sub(&ratio.mul(&s).mid());
            let w = ratio.div(&denom.mid()).mid();
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] = z[i].sub(&w).mid();
            let zn = z[i].abs().abs_lower().max(Mag::pow2(-64));
            worst = worst.max(w.abs_upper().div_up(zn));
        }
        if worst <= target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(UnimodularError::NoConvergence { bits: prec });
    }
    // Smith's theorem with rigorous balls
    let lead = CBall::real(coeffs[n].clone());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _) = horner(&coeffs, &z[i]);
        let mut prod = lead.clone();
        for j in (0..n).filter(|&j| j != i) {
            prod = prod.mul(&z[i].sub(&z[j]));
        }
        let w = p.div(&prod);
        let r = w.abs_upper().mul_up(Mag::from_u64_up(n as u64));
        out.push((z[i].clone(), r));
    }
    Ok(out)
}

/// |1 − |root|| for every root, with inclusion disks and certification.
pub fn unit_circle_report(p: &IntPolynomial, digits: u32) -> Result<UnitCircleReport, UnimodularError> {
    let deg = p.degree();
    if deg == 0 {
        return Err(UnimodularError::Constant(deg));
    }
    let coeff_bits = p.coeffs.iter().map(|c| c.bits()).max().unwrap_or(1) as u32;
    let prec = digits_to_bits(digits) + coeff_bits + 64;
    let rat = p.to_rational();
    let mut disks = Vec::new();
    for (factor, mult) in squarefree_parts(&rat) {
        for (center, radius) in enclose_squarefree(&factor, prec)? {
            disks.push(Disk { center, radius, multiplicity: mult });
        }
    }
    let isolated = disks.iter().enumerate().all(|(i, a)| {
        disks
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || a.center.sub(&b.center).abs().abs_lower() > a.radius.add_up(b.radius))
    });
    let inversion_isolated = isolated
        && disks.iter().enumerate().all(|(i, d)| {
            // image of D(c, r) under z ↦ 1/z̄: center c/(|c|² − r²), radius r/(|c|² − r²)
            let r = BigReal::from_mag(d.radius, prec);
            let denom = d.center.norm_sqr().sub(&r.sqr());
            if !denom.is_positive() {
                return false;
            }
            let c2 = CBall { re: d.center.re.div(&denom), im: d.center.im.div(&denom) };
            let r2 = r.div(&denom).abs_upper();
            disks.iter().enumerate().all(|(j, o)| i == j || c2.sub(&o.center).abs().abs_lower() > r2.add_up(o.radius))
        });
    let one = BigReal::one(prec);
    let coeffs: Vec<BigReal> = rat.iter().map(|c| BigReal::from_rational(c, prec)).collect();
    let mut roots = Vec::new();
    let mut max_dev = 0f64;
    let mut max_res = Mag::ZERO;
    for d in &disks {
        // midpoint plus radius, kept in full precision until the end
        let ball = one.sub(&d.center.abs()).abs().add(&BigReal::from_mag(d.radius, prec));
        let dev = ball.mid().add(&BigReal::from_mag(ball.rad(), prec)).to_f64();
        max_dev = max_dev.max(dev);
        let (val, _) = horner(&coeffs, &d.center);
        max_res = max_res.max(val.abs_upper());
        let shown = (digits as usize).min(60);
        roots.push(RootEnclosure {
            re: d.center.re.mid_to_decimal(shown),
            im: d.center.im.mid_to_decimal(shown),
            radius: d.radius.to_f64(),
            multiplicity: d.multiplicity,
            deviation: dev,
        });
    }
    let count: usize = disks.iter().map(|d| d.multiplicity).sum();
    debug_assert_eq!(count, deg);
    let band = 10f64.powf(-(digits as f64) / 2.0);
    let self_inversive = self_inversive_check(p);
    Ok(UnitCircleReport {
        degree: deg,
        digits,
        self_inversive,
        max_deviation: max_dev,
        certified: isolated && max_dev < band,
        inversion_isolated: self_inversive && inversion_isolated,
        max_residual: max_res.to_f64(),
        roots,
    })
}

/// Largest |1 − |root|| over all roots (an upper bound).
pub fn unit_circle_deviation(p: &IntPolynomial, digits: u32) -> Result<f64, UnimodularError> {
    Ok(unit_circle_report(p, digits)?.max_deviation)
}

/// Approximate roots as f64 pairs, each repeated by multiplicity.
pub fn approximate_roots(p: &IntPolynomial, digits: u32) -> Result<Vec<Complex64>, UnimodularError> {
    let coeff_bits = p.coeffs.iter().map(|c| c.bits()).max().unwrap_or(1) as u32;
    let prec = digits_to_bits(digits) + coeff_bits + 64;
    let mut out = Vec::new();
    for (factor, mult) in squarefree_parts(&p.to_rational()) {
        for (c, _) in enclose_squarefree(&factor, prec)? {
            out.extend(std::iter::repeat_n(c.to_c64(), mult));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPolynomial) -> Vec<i64> {
        p.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_members() {
        assert_eq!(ints(&conj_poly(2).unwrap()), vec![-3, 1, -1, 3]);
        assert!(conj_poly(3).is_err());
        assert!(conj_poly(0).is_err());
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (x − 1)²(x + 2)
        let p: Vec<Rational> = [2, -3, 0, 1].iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let parts = squarefree_parts(&p);
        let degs: Vec<(usize, usize)> = parts.iter().map(|(f, m)| (f.len() - 1, *m)).collect();
        assert_eq!(degs, vec![(1, 1), (1, 2)]);
        assert_eq!(derivative_gcd_degree_mod(&p), Some(1));
        let q: Vec<Rational> = [-1, 0, 1].iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        assert_eq!(derivative_gcd_degree_mod(&q), Some(0));
    }

    #[test]
    fn display_form() {
        assert_eq!(IntPolynomial::new([-3, 1, -1, 3]).unwrap().to_string(), "3x^3 - x^2 + x - 3");
        assert_eq!(IntPolynomial::new([-1, 1]).unwrap().to_string(), "x - 1");
    }
}
