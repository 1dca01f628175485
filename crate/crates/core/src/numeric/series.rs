//! Direct summation of Σ f(πnz)/n^s for f ∈ {sec, tan, csc, cot} at a
//! quadratic irrational z, with a rigorous tail bound.
//!
//! Tail bound: for n in a dyadic block [N, 2N) the points nz mod 1 are
//! pairwise separated by at least 1/(NL), where L = √Δ + |a| comes from the
//! primitive minimal polynomial ax² + bx + c of z (Liouville). Summing the
//! reciprocal distances to the nearest pole gives
//!
//!   Σ_{N≤n<2N} |f(πnz)| ≤ N·L·(2c₀ + 1 + log N),
//!
//! with c₀ = 4 for sec/tan and c₀ = 1 for csc/cot. Weighting by n^{−s} and
//! summing the geometric series in r = 2^{1−s} bounds everything past 2^M.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{BigReal, Mag, NumericError};
use crate::exact::{QuadSurd, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrigKind {
    Sec,
    Tan,
    Csc,
    Cot,
}

impl TrigKind {
    /// Poles sit at half-odd integers (sec, tan) rather than integers.
    fn half_poles(self) -> bool {
        matches!(self, TrigKind::Sec | TrigKind::Tan)
    }

    fn c0(self) -> f64 {
        if self.half_poles() {
            4.0
        } else {
            1.0
        }
    }
}

/// Exponent s of the series, exact when it is an integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Int(u32),
    Real(f64),
}

impl Exponent {
    pub fn from_f64(s: f64) -> Self {
        if s.fract() == 0.0 && s > 0.0 && s < 1e6 {
            Exponent::Int(s as u32)
        } else {
            Exponent::Real(s)
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Int(k) => k as f64,
            Exponent::Real(s) => s,
        }
    }

    /// n^{−s}.
    pub fn inv_power(&self, n: u64, prec: u32) -> BigReal {
        match *self {
            Exponent::Int(k) => BigReal::from_int(n, prec).powi(k as i64).recip(),
            Exponent::Real(s) => {
                let ln = BigReal::from_int(n, prec + 16).ln();
                ln.mul(&BigReal::from_f64(-s, prec + 16)).exp().with_prec(prec)
            }
        }
    }
}

/// L = √Δ + |a| for the primitive minimal polynomial of z, rounded up.
pub fn liouville_constant(z: &QuadSurd) -> Result<f64, NumericError> {
    let (a, b, c) = z
        .minimal_polynomial()
        .ok_or_else(|| NumericError::Domain(format!("{z} is rational; the series needs an irrational point")))?;
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    let disc = disc.to_f64().unwrap_or(f64::INFINITY);
    let l = disc.sqrt() + a.abs().to_f64().unwrap_or(f64::INFINITY);
    Ok(l * (1.0 + 1e-12))
}

/// Upper bound for Σ_{n ≥ 2^m} |f(πnz)|/n^s.
pub fn tail_bound(kind: TrigKind, l: f64, s: f64, m: u32) -> Mag {
    let r = 2f64.powf(1.0 - s);
    let ln2 = std::f64::consts::LN_2;
    let c = 2.0 * kind.c0() + 1.0;
    let mf = m as f64;
    let t = l * r.powf(mf) * ((c + mf * ln2) / (1.0 - r) + ln2 * r / ((1.0 - r) * (1.0 - r)));
    if !t.is_finite() {
        return Mag::INF;
    }
    // f64 evaluation error is far below this margin
    Mag::from_f64_up(t * (1.0 + 1e-9))
}

/// Evaluates f(πnz) for integer n with every term resolved to about `prec`
/// bits, however close nz comes to a pole.
pub(crate) struct Multiples {
    z: QuadSurd,
    a: Rational,
    b: Rational,
    root: BigReal,
    prec: u32,
}

impl Multiples {
    /// Precision for √d covers the cancellation in nz − m up to `n_max`
    /// and the smallest distance to a pole that Liouville allows.
    pub fn new(z: &QuadSurd, n_max: u64, prec: u32) -> Result<Self, NumericError> {
        let l = if z.is_rational() { 1.0 } else { liouville_constant(z)? };
        let bmag = z.b().abs().to_f64().unwrap_or(1.0).max(1.0);
        let nb = (n_max.max(1) as f64).log2();
        let extra = 2.0 * nb + bmag.log2() + (8.0 * l).log2() + 32.0;
        let wp = prec + extra.ceil() as u32;
        let root = if z.is_rational() { BigReal::zero(wp) } else { BigReal::from_int(z.radicand(), wp).sqrt() };
        Ok(Multiples { z: z.clone(), a: z.a().clone(), b: z.b().clone(), root, prec })
    }

    fn wp(&self) -> u32 {
        self.root.prec()
    }

    /// n·z − shift as a ball at working precision.
    fn offset_ball(&self, n: u64, shift: &Rational) -> BigReal {
        let nq = Rational::from_integer(BigInt::from(n));
        let rat = &self.a * &nq - shift;
        let wp = self.wp();
        let r = BigReal::from_rational(&rat, wp);
        if self.b.is_zero() {
            r
        } else {
            r.add(&self.root.mul_rational(&(&self.b * &nq)))
        }
    }

    /// Nearest integer to n·z − shift.
    fn nearest(&self, n: u64, shift: &Rational) -> BigInt {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let ball = self.offset_ball(n, &(shift - &half));
        match ball.floor_exact() {
            Some(m) => m,
            None => {
                let t = self.z.scale(&Rational::from_integer(BigInt::from(n)));
                t.add_rational(&(&half - shift)).floor()
            }
        }
    }

    pub fn eval(&self, kind: TrigKind, n: u64) -> Result<BigReal, NumericError> {
        let shift = if kind.half_poles() { Rational::new(BigInt::one(), BigInt::from(2)) } else { Rational::zero() };
        let m = self.nearest(n, &shift);
        let e = self.offset_ball(n, &(&shift + Rational::from_integer(m.clone())));
        if e.is_exact() && e.mid_rational().is_zero() {
            return Err(NumericError::Pole(format!("{kind:?}(π·{n}·{})", self.z)));
        }
        let pi = BigReal::pi(self.wp());
        let (s, c) = pi.mul(&e).sin_cos();
        if s.contains_zero() {
            return Err(NumericError::Precision(format!("{kind:?} term n = {n} at {}", self.z)));
        }
        let odd = m.is_odd();
        let v = match kind {
            // cos(π(m + ½ + e)) = −(−1)^m sin(πe)
            TrigKind::Sec => {
                let r = s.recip();
                if odd {
                    r
                } else {
                    r.neg()
                }
            }
            TrigKind::Tan => c.div(&s).neg(),
            TrigKind::Csc => {
                let r = s.recip();
                if odd {
                    r.neg()
                } else {
                    r
                }
            }
            TrigKind::Cot => c.div(&s),
        };
        Ok(v.with_prec(self.prec))
    }
}

/// Σ_{n<2^m} f(πnz)/n^s plus a ball of the tail bound.
pub fn direct_sum(kind: TrigKind, s: Exponent, z: &QuadSurd, m: u32, prec: u32) -> Result<BigReal, NumericError> {
    if s.value() <= 1.0 {
        return Err(NumericError::Domain(format!("exponent {} must exceed 1", s.value())));
    }
    let l = liouville_constant(z)?;
    let n_end = 1u64 << m;
    let wp = prec + 2 * m + 16;
    let mult = Multiples::new(z, n_end, wp)?;
    let mut acc = BigReal::zero(wp);
    for n in 1..n_end {
        let t = mult.eval(kind, n)?;
        acc = acc.add(&t.mul(&s.inv_power(n, wp)));
    }
    Ok(acc.with_rad(tail_bound(kind, l, s.value(), m)).with_prec(prec))
}

/// As [`direct_sum`], doubling the term count from 2^`m_start` until the
/// tail bound drops below 2^{−prec} or 2^`m_max` terms are used.
pub fn direct_sum_adaptive(
    kind: TrigKind,
    s: Exponent,
    z: &QuadSurd,
    m_start: u32,
    m_max: u32,
    prec: u32,
) -> Result<(BigReal, u32), NumericError> {
    if s.value() <= 1.0 {
        return Err(NumericError::Domain(format!("exponent {} must exceed 1", s.value())));
    }
    let l = liouville_constant(z)?;
    let target = Mag::pow2(-(prec as i64));
    let mut m = m_start;
    while m < m_max && tail_bound(kind, l, s.value(), m) > target {
        m += 1;
    }
    // no point resolving terms far below the tail that remains
    let tail = tail_bound(kind, l, s.value(), m);
    let reach = if tail.is_inf() { 64 } else { (-tail.top()).clamp(0, u32::MAX as i64 / 2) as u32 + 24 };
    let wp = prec.min(reach) + 2 * m + 16;
    let mult = Multiples::new(z, 1u64 << m, wp)?;
    let mut acc = BigReal::zero(wp);
    for n in 1..(1u64 << m) {
        acc = acc.add(&mult.eval(kind, n)?.mul(&s.inv_power(n, wp)));
    }
    Ok((acc.with_rad(tail).with_prec(prec), m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn single_terms_match_f64() {
        let z = QuadSurd::sqrt_int(2);
        let m = Multiples::new(&z, 1000, 120).unwrap();
        for n in [1u64, 2, 5, 12, 29, 70, 169, 408, 985] {
            let x = std::f64::consts::PI * n as f64 * 2f64.sqrt();
            let cases = [
                (TrigKind::Sec, 1.0 / x.cos()),
                (TrigKind::Tan, x.tan()),
                (TrigKind::Csc, 1.0 / x.sin()),
                (TrigKind::Cot, 1.0 / x.tan()),
            ];
            for (kind, expected) in cases {
                let v = m.eval(kind, n).unwrap().to_f64();
                assert!((v - expected).abs() <= 1e-9 * expected.abs().max(1.0), "{kind:?} n = {n}: {v} vs {expected}");
            }
        }
    }

    #[test]
    fn hard_terms_keep_relative_accuracy() {
        // 985·√2 is within 4e-4 of an integer, so csc and cot are large
        let z = QuadSurd::sqrt_int(2);
        let m = Multiples::new(&z, 1000, 200).unwrap();
        let v = m.eval(TrigKind::Csc, 985).unwrap();
        assert!(v.rel_accuracy_bits() > 180, "{}", v.rel_accuracy_bits());
        let half = QuadSurd::new(rat(1, 2), rat(0, 1), 1);
        assert!(Multiples::new(&half, 4, 64).unwrap().eval(TrigKind::Sec, 1).is_err());
    }

    #[test]
    fn tail_bound_shrinks() {
        let l = liouville_constant(&QuadSurd::sqrt_int(2)).unwrap();
        assert!((l - (8f64.sqrt() + 1.0)).abs() < 1e-9);
        let a = tail_bound(TrigKind::Sec, l, 2.0, 10);
        let b = tail_bound(TrigKind::Sec, l, 2.0, 20);
        assert!(b < a && a.to_f64() < 1.0);
    }
}
