//! Hurwitz zeta by Euler–Maclaurin, and ψ_s at rational points with odd
//! denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::series::Exponent;
use super::{BigReal, Mag, NumericError};
use crate::diophantine::digits_to_bits;
use crate::exact::{bernoulli, Rational};

/// (x)^{−s} for a positive ball x.
fn pow_neg(x: &BigReal, s: Exponent) -> BigReal {
    match s {
        Exponent::Int(k) => x.powi(k as i64).recip(),
        Exponent::Real(sv) => x.ln().mul(&BigReal::from_f64(-sv, x.prec())).exp(),
    }
}

/// ζ(s, a) = Σ_{n≥0} (n + a)^{−s} for s > 1 and a in (0, 1].
///
/// With f(x) = (x + a)^{−s}, the remainder after M − 1 Bernoulli terms is
/// at most (8/(2π)^{2M})·(s)_{2M−1}·(N + a)^{1−s−2M}, because f^{(2M)} keeps
/// one sign on [N, ∞).
pub fn hurwitz_zeta_prec(s: Exponent, a: &Rational, prec: u32) -> Result<BigReal, NumericError> {
    let sv = s.value();
    if sv <= 1.0 || !sv.is_finite() {
        return Err(NumericError::Domain(format!("Hurwitz zeta needs s > 1, got {sv}")));
    }
    if !a.is_positive() || *a > Rational::one() {
        return Err(NumericError::Domain(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    let wp = prec + 32;
    let target = Mag::pow2(-(prec as i64) - 8);
    let mut n_shift = (prec / 6 + 10) as u64;
    loop {
        let m_terms = n_shift;
        let sb = match s {
            Exponent::Int(k) => BigReal::from_int(k, wp),
            Exponent::Real(v) => BigReal::from_f64(v, wp),
        };
        let x = BigReal::from_rational(&(a + Rational::from_integer(BigInt::from(n_shift))), wp);
        // remainder bound, evaluated in a low-precision ball
        let lp = 64;
        let mut poch = BigReal::one(lp);
        let sl = sb.clone().with_prec(lp);
        for i in 0..(2 * m_terms - 1) {
            poch = poch.mul(&sl.add(&BigReal::from_int(i, lp)));
        }
        let xl = x.clone().with_prec(lp);
        let two_pi = BigReal::pi(lp).mul_2exp(1);
        let bound = BigReal::from_int(8, lp)
            .mul(&poch)
            .div(&two_pi.powi(2 * m_terms as i64))
            .mul(&pow_neg(&xl, s).mul(&xl.powi(1 - 2 * m_terms as i64)));
        let bound = bound.abs_upper();
        if bound > target {
            n_shift += n_shift / 2 + 4;
            continue;
        }
        let mut acc = BigReal::zero(wp);
        for n in 0..n_shift {
            let t = BigReal::from_rational(&(a + Rational::from_integer(BigInt::from(n))), wp);
            acc = acc.add(&pow_neg(&t, s));
        }
        let x_s = pow_neg(&x, s);
        // (N+a)^{1−s}/(s−1) + (N+a)^{−s}/2
        acc = acc.add(&x_s.mul(&x).div(&sb.sub(&BigReal::one(wp))));
        acc = acc.add(&x_s.mul_2exp(-1));
        let x2inv = x.sqr().recip();
        // term_j = B_{2j}/(2j)! · (s)_{2j−1} · (N+a)^{1−s−2j}
        let mut pochhammer = sb.clone();
        let mut power = x_s.div(&x);
        let mut fact = BigInt::from(2);
        for j in 1..m_terms {
            let b = BigReal::from_rational(&(bernoulli(2 * j) / Rational::from_integer(fact.clone())), wp);
            acc = acc.add(&b.mul(&pochhammer).mul(&power));
            let i = 2 * j - 1;
            pochhammer = pochhammer.mul(&sb.add(&BigReal::from_int(i, wp))).mul(&sb.add(&BigReal::from_int(i + 1, wp)));
            power = power.mul(&x2inv);
            fact *= (2 * j + 1) * (2 * j + 2);
        }
        return Ok(acc.with_rad(bound).with_prec(prec));
    }
}

pub fn hurwitz_zeta(s: f64, a: &Rational, digits: u32) -> Result<BigReal, NumericError> {
    hurwitz_zeta_prec(Exponent::from_f64(s), a, digits_to_bits(digits) + 8)
}

/// ψ_s(p/q) for odd q: residues of n mod 2q repeat the secant values, so
/// ψ_s(p/q) = (2q)^{−s} Σ_{r=1}^{2q} sec(πrp/q) ζ(s, r/(2q)).
pub fn psi_rational_point_prec(s: u32, p: &BigInt, q: &BigInt, prec: u32) -> Result<BigReal, NumericError> {
    if s < 2 {
        return Err(NumericError::Domain(format!("exponent {s} must be at least 2")));
    }
    if !q.is_positive() {
        return Err(NumericError::Domain(format!("denominator {q} must be positive")));
    }
    if q.is_even() {
        return Err(NumericError::Domain(format!("rational points with even denominator are excluded ({p}/{q})")));
    }
    let g = p.gcd(q);
    let (p, q) = if g.is_one() || g.is_zero() { (p.clone(), q.clone()) } else { (p / &g, q / &g) };
    let two_q: BigInt = &q * 2;
    let wp = prec + 16 + two_q.bits() as u32;
    let period: u64 = num_traits::ToPrimitive::to_u64(&two_q)
        .filter(|&v| v <= 1 << 20)
        .ok_or_else(|| NumericError::Domain(format!("denominator {q} too large")))?;
    let pi = BigReal::pi(wp);
    let mut acc = BigReal::zero(wp);
    for r in 1..=period {
        let angle = Rational::new((BigInt::from(r) * &p).mod_floor(&two_q), q.clone());
        let c = pi.mul_rational(&angle).cos();
        if c.contains_zero() {
            return Err(NumericError::Pole(format!("sec(π·{r}·{p}/{q})")));
        }
        let h = hurwitz_zeta_prec(Exponent::Int(s), &Rational::new(BigInt::from(r), two_q.clone()), wp)?;
        acc = acc.add(&h.div(&c));
    }
    let scale = BigReal::from_int(two_q.clone(), wp).powi(s as i64).recip();
    Ok(acc.mul(&scale).with_prec(prec))
}

pub fn psi_rational_point(s: u32, p: i64, q: u64, digits: u32) -> Result<BigReal, NumericError> {
    psi_rational_point_prec(s, &BigInt::from(p), &BigInt::from(q), digits_to_bits(digits) + 8)
}
