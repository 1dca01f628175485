use num_bigint::BigInt;

use super::descent::{cot_descent, psi_descent};
use super::hurwitz::psi_rational_point_prec;
use super::series::{direct_sum_adaptive, Exponent, TrigKind};
use super::{BigReal, NumericError};
use crate::diophantine::digits_to_bits;
use crate::exact::{QuadSurd, Rational};

/// Largest direct sum, 2^20 terms.
pub const DIRECT_MAX_LOG2_TERMS: u32 = 20;
const DIRECT_MIN_LOG2_TERMS: u32 = 11;
/// Cap for the direct path of the two-path tangent and cosecant checks.
const CHECK_MAX_LOG2_TERMS: u32 = 16;

pub fn working_bits(digits: u32) -> u32 {
    digits_to_bits(digits) + 8
}

fn rational_parts(z: &QuadSurd) -> (BigInt, BigInt) {
    let r = z.a();
    (r.numer().clone(), r.denom().clone())
}

/// ψ_k(z)/π^k for integer k ≥ 2: descent for even k at irrational z, the
/// Hurwitz decomposition at rational z.
pub fn psi_over_pi_power(k: u32, z: &QuadSurd, digits: u32) -> Result<BigReal, NumericError> {
    let prec = working_bits(digits);
    if z.is_rational() {
        let (p, q) = rational_parts(z);
        let v = psi_rational_point_prec(k, &p, &q, prec + 8)?;
        return Ok(v.div(&BigReal::pi(prec + 8).powi(k as i64)).with_prec(prec));
    }
    if k.is_multiple_of(2) {
        return psi_descent(k as u64, z, prec);
    }
    let v = psi_numeric(k as f64, z, digits)?;
    Ok(v.div(&BigReal::pi(prec).powi(k as i64)))
}

/// ψ_s(z) = Σ sec(πnz)/n^s.
///
/// Even integer s uses the descent and reaches the requested digits. Other
/// exponents fall back to direct summation with at most 2^20 terms; the
/// returned radius then reports what was achieved.
pub fn psi_numeric(s: f64, z: &QuadSurd, digits: u32) -> Result<BigReal, NumericError> {
    if !(s >= 2.0) || !s.is_finite() {
        return Err(NumericError::Domain(format!("exponent {s} must be at least 2")));
    }
    let prec = working_bits(digits);
    let e = Exponent::from_f64(s);
    if z.is_rational() {
        return match e {
            Exponent::Int(k) => {
                let (p, q) = rational_parts(z);
                psi_rational_point_prec(k, &p, &q, prec)
            }
            Exponent::Real(_) => Err(NumericError::Domain(format!("rational point {z} needs an integer exponent"))),
        };
    }
    match e {
        Exponent::Int(k) if k % 2 == 0 => {
            let v = psi_descent(k as u64, z, prec + 8)?;
            Ok(v.mul(&BigReal::pi(prec + 8).powi(k as i64)).with_prec(prec))
        }
        _ => Ok(direct_sum_adaptive(TrigKind::Sec, e, z, DIRECT_MIN_LOG2_TERMS, DIRECT_MAX_LOG2_TERMS, prec)?.0),
    }
}

/// ξ_s(z) = Σ cot(πnz)/n^s for integer s ≥ 2.
pub fn cotangent_zeta(s: u32, z: &QuadSurd, digits: u32) -> Result<BigReal, NumericError> {
    if s < 2 {
        return Err(NumericError::Domain(format!("exponent {s} must be at least 2")));
    }
    if z.is_rational() {
        return Err(NumericError::Domain(format!("{z} is rational")));
    }
    let prec = working_bits(digits);
    if s % 2 == 1 {
        let v = cot_descent(s as u64, z, prec + 8)?;
        return Ok(v.mul(&BigReal::pi(prec + 8).powi(s as i64)).with_prec(prec));
    }
    Ok(direct_sum_adaptive(TrigKind::Cot, Exponent::Int(s), z, DIRECT_MIN_LOG2_TERMS, DIRECT_MAX_LOG2_TERMS, prec)?.0)
}

/// A series value computed through a cotangent identity and by direct
/// summation; the two balls are required to overlap.
#[derive(Debug, Clone)]
pub struct TwoPath {
    pub identity: BigReal,
    pub direct: BigReal,
    pub direct_log2_terms: u32,
}

impl TwoPath {
    /// The tighter of the two enclosures.
    pub fn value(&self) -> &BigReal {
        if self.identity.rad() <= self.direct.rad() {
            &self.identity
        } else {
            &self.direct
        }
    }

    /// Upper bound for |identity − direct|.
    pub fn residual(&self) -> super::Mag {
        self.identity.dist_upper(&self.direct)
    }
}

fn two_path(kind: TrigKind, s: u32, z: &QuadSurd, identity: BigReal, digits: u32) -> Result<TwoPath, NumericError> {
    let prec = working_bits(digits).min(64 + 2 * CHECK_MAX_LOG2_TERMS);
    let (direct, m) =
        direct_sum_adaptive(kind, Exponent::Int(s), z, DIRECT_MIN_LOG2_TERMS, CHECK_MAX_LOG2_TERMS, prec)?;
    if !identity.overlaps(&direct) {
        return Err(NumericError::PathMismatch {
            direct: direct.to_decimal_string(20),
            identity: identity.to_decimal_string(20),
        });
    }
    Ok(TwoPath { identity, direct, direct_log2_terms: m })
}

/// Σ tan(πnz)/n^s, via ξ_s(z) − 2ξ_s(2z) and directly.
pub fn tangent_series(s: u32, z: &QuadSurd, digits: u32) -> Result<TwoPath, NumericError> {
    let two = Rational::from_integer(BigInt::from(2));
    let a = cotangent_zeta(s, z, digits)?;
    let b = cotangent_zeta(s, &z.scale(&two), digits)?;
    two_path(TrigKind::Tan, s, z, a.sub(&b.mul_2exp(1)), digits)
}

/// Σ csc(πnz)/n^s, via ξ_s(z/2) − ξ_s(z) and directly.
pub fn cosecant_series(s: u32, z: &QuadSurd, digits: u32) -> Result<TwoPath, NumericError> {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let a = cotangent_zeta(s, &z.scale(&half), digits)?;
    let b = cotangent_zeta(s, z, digits)?;
    two_path(TrigKind::Csc, s, z, a.sub(&b), digits)
}
