//! Explicit evaluation families for ψ_k at quadratic irrationals, and the
//! normalized sequence β_k built from ψ_k(√6).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::exact::primes::{factorize, is_prime_u64};
use crate::exact::{ExactError, QuadSurd, Rational};
use crate::modular::{fe_coefficients, psi_exact_sqrt, ModularError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("the family index j must be non-zero")]
    ZeroIndex,
    #[error("n must be non-zero")]
    ZeroN,
    #[error("weight k = {0} must be even and at least 2")]
    BadWeight(u64),
    #[error("argument {0} is not a positive irrational square root")]
    DegenerateArgument(String),
    #[error("value {0} has a non-zero surd component")]
    NotRational(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gen1,
    Gen2,
    Semiperiod,
    PellFamily,
    FixedPoint,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gen1 => "gen1",
            Family::Gen2 => "gen2",
            Family::Semiperiod => "semiperiod",
            Family::PellFamily => "pell_family",
            Family::FixedPoint => "fixed_point",
        })
    }
}

/// ψ_k(argument) = coefficient·π^k.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPsiValue {
    pub k: u64,
    pub argument: QuadSurd,
    pub coefficient: Rational,
    pub family: Family,
}

fn check_weight(k: u64) -> Result<(), ClosedFormError> {
    if k < 2 || k % 2 == 1 {
        return Err(ClosedFormError::BadWeight(k));
    }
    Ok(())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// (1 + u)^e − (1 − u)^e.
fn odd_power_difference(u: &QuadSurd, e: i64) -> Result<QuadSurd, ExactError> {
    let one = QuadSurd::one();
    one.checked_add(u)?.pow(e)?.checked_sub(&one.checked_sub(u)?.pow(e)?)
}

/// (i^k/k!) Σ_m c_m [(1+u)^{m−1} − (1−u)^{m−1}] / [(1+u)^{k−1} − (1−u)^{k−1}].
fn surd_quotient_sum(k: u64, u: &QuadSurd) -> Result<Rational, ClosedFormError> {
    let denom = odd_power_difference(u, k as i64 - 1)?;
    let mut acc = QuadSurd::zero();
    for (m, c) in fe_coefficients(k) {
        let term = odd_power_difference(u, m as i64 - 1)?.checked_div(&denom)?;
        acc = acc.checked_add(&term.scale(&c))?;
    }
    let mut fact = BigInt::one();
    for i in 2..=k {
        fact *= i;
    }
    let sign = if (k / 2).is_multiple_of(2) { 1 } else { -1 };
    let value = acc.scale(&Rational::new(BigInt::from(sign), fact));
    value.to_rational().ok_or_else(|| ClosedFormError::NotRational(value.to_string()))
}

fn family_surd(num: i64, den: i64) -> Result<QuadSurd, ClosedFormError> {
    Ok(QuadSurd::sqrt_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))?)
}

/// √(2j(2j+1)) as an element of ℚ(√d).
fn gen_argument(j: i64) -> Result<QuadSurd, ClosedFormError> {
    let n = 2 * j * (2 * j + 1);
    Ok(QuadSurd::sqrt_rational(&int(n))?)
}

/// ψ_k(√(2j(2j+1))), from the fixed point z = 2j + √(2j(2j+1)) of the
/// relation Bz = z − 4j.
pub fn psi_gen1(k: u64, j: i64) -> Result<ExactPsiValue, ClosedFormError> {
    check_weight(k)?;
    if j == 0 {
        return Err(ClosedFormError::ZeroIndex);
    }
    let u = family_surd(2 * j, 2 * j + 1)?;
    Ok(ExactPsiValue { k, argument: gen_argument(j)?, coefficient: surd_quotient_sum(k, &u)?, family: Family::Gen1 })
}

/// ψ_k(1 + √(2j(2j+1))), the companion with ratio (2j+1)/(2j).
pub fn psi_gen2(k: u64, j: i64) -> Result<ExactPsiValue, ClosedFormError> {
    check_weight(k)?;
    if j == 0 {
        return Err(ClosedFormError::ZeroIndex);
    }
    let v = family_surd(2 * j + 1, 2 * j)?;
    Ok(ExactPsiValue {
        k,
        argument: gen_argument(j)?.add_rational(&Rational::one()),
        coefficient: surd_quotient_sum(k, &v)?,
        family: Family::Gen2,
    })
}

/// ψ_k(√(8j(2j+1))) = 2^{k−1}[ψ_k(z) + ψ_k(z+1)] with z = √(2j(2j+1)).
pub fn psi_semiperiod(k: u64, j: i64) -> Result<ExactPsiValue, ClosedFormError> {
    let g1 = psi_gen1(k, j)?;
    let g2 = psi_gen2(k, j)?;
    let scale = Rational::from_integer(BigInt::one() << (k - 1) as usize);
    Ok(ExactPsiValue {
        k,
        argument: g1.argument.scale(&int(2)),
        coefficient: scale * (g1.coefficient + g2.coefficient),
        family: Family::Semiperiod,
    })
}

/// ψ₂(√(8j(2j+1))); the coefficient is 1/6 for every j ≠ 0.
pub fn psi2_semiperiod_family(j: i64) -> Result<ExactPsiValue, ClosedFormError> {
    psi_semiperiod(2, j)
}

/// ψ₂(√(2j(2jn+1)/n)) = (1 + 3j/n)·π²/6, from the fixed point of A^j B^n A^j.
pub fn psi2_pell_family(j: i64, n: i64) -> Result<ExactPsiValue, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::ZeroN);
    }
    let r = Rational::new(BigInt::from(2 * j) * BigInt::from(2 * j * n + 1), BigInt::from(n));
    if !r.is_positive() {
        return Err(ClosedFormError::DegenerateArgument(format!("√({r})")));
    }
    let argument = QuadSurd::sqrt_rational(&r)?;
    if argument.is_rational() {
        return Err(ClosedFormError::DegenerateArgument(format!("√({r})")));
    }
    let coefficient = (Rational::one() + Rational::new(BigInt::from(3 * j), BigInt::from(n))) / int(6);
    Ok(ExactPsiValue { k: 2, argument, coefficient, family: Family::PellFamily })
}

/// ψ_k(√j) via a factorable Pell matrix.
pub fn psi_fixed_point(k: u64, j: u64) -> Result<ExactPsiValue, ClosedFormError> {
    check_weight(k)?;
    let c = psi_exact_sqrt(k, j)?;
    let coefficient = c.to_rational().ok_or_else(|| ClosedFormError::NotRational(c.to_string()))?;
    Ok(ExactPsiValue { k, argument: QuadSurd::sqrt_int(j), coefficient, family: Family::FixedPoint })
}

/// β_k = Σ_m c_m 3^{k−m} [(3+√6)^{m−1} − (3−√6)^{m−1}]/√6.
pub fn beta(k: u64) -> Result<Rational, ClosedFormError> {
    check_weight(k)?;
    let r6 = QuadSurd::sqrt_int(6);
    let plus = r6.add_rational(&int(3));
    let minus = (-&r6).add_rational(&int(3));
    let mut acc = QuadSurd::zero();
    for (m, c) in fe_coefficients(k) {
        let e = m as i64 - 1;
        let diff = plus.pow(e)?.checked_sub(&minus.pow(e)?)?.checked_div(&r6)?;
        let three = Rational::from_integer(BigInt::from(3).pow((k - m) as u32));
        acc = acc.checked_add(&diff.scale(&(c * three)))?;
    }
    acc.to_rational().ok_or_else(|| ClosedFormError::NotRational(acc.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorProfile {
    pub k: u64,
    #[serde(serialize_with = "ser_display")]
    pub beta: Rational,
    #[serde(serialize_with = "ser_display")]
    pub denominator: BigInt,
    /// (prime, exponent) pairs of the denominator.
    #[serde(serialize_with = "ser_factors")]
    pub factors: Vec<(BigUint, u32)>,
    /// Primes p with (p − 1) | k.
    pub predicted: Vec<u64>,
    /// Primes dividing the denominator with (p − 1) ∤ k.
    #[serde(serialize_with = "ser_primes")]
    pub anomalous: Vec<BigUint>,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_factors<S: serde::Serializer>(f: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.iter().map(|(p, e)| (p.to_string(), *e)))
}

fn ser_primes<S: serde::Serializer>(f: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.iter().map(|p| p.to_string()))
}

pub fn denominator_profile(k: u64) -> Result<DenominatorProfile, ClosedFormError> {
    let b = beta(k)?;
    let denominator = b.denom().clone();
    let factors = factorize(denominator.magnitude());
    let predicted: Vec<u64> = (1..=k).filter(|d| k.is_multiple_of(*d) && is_prime_u64(d + 1)).map(|d| d + 1).collect();
    let kb = BigUint::from(k);
    let anomalous = factors.iter().map(|(p, _)| p.clone()).filter(|p| !kb.is_multiple_of(&(p - 1u32))).collect();
    Ok(DenominatorProfile { k, beta: b, denominator, factors, predicted, anomalous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::Zero;

    #[test]
    fn gen1_examples() {
        assert_eq!(psi_gen1(2, 1).unwrap().coefficient, rat(2, 3));
        assert_eq!(psi_gen1(2, 1).unwrap().argument, QuadSurd::sqrt_int(6));
        assert_eq!(psi_gen1(2, -1).unwrap().coefficient, rat(-1, 3));
        assert_eq!(psi_gen1(2, -1).unwrap().argument, QuadSurd::sqrt_int(2));
        assert_eq!(psi_gen1(4, 1).unwrap().coefficient, rat(127, 1980));
        assert!(matches!(psi_gen1(2, 0), Err(ClosedFormError::ZeroIndex)));
    }

    #[test]
    fn pell_family_examples() {
        let v = psi2_pell_family(-1, 1).unwrap();
        assert_eq!((v.argument, v.coefficient), (QuadSurd::sqrt_int(2), rat(-1, 3)));
        let v = psi2_pell_family(1, -3).unwrap();
        assert_eq!(v.argument, QuadSurd::sqrt_rational(&rat(10, 3)).unwrap());
        assert!(v.coefficient.is_zero());
        assert_eq!(psi2_pell_family(1, 1).unwrap().coefficient, rat(2, 3));
        assert!(psi2_pell_family(1, 0).is_err());
        assert!(psi2_pell_family(0, 1).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(2).unwrap(), rat(-8, 3));
        assert_eq!(beta(4).unwrap(), rat(508, 5));
        assert_eq!(beta(6).unwrap(), rat(-64896, 7));
        assert!(beta(3).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = denominator_profile(20).unwrap();
        assert_eq!(p.denominator, BigInt::from(385));
        assert_eq!(p.anomalous, vec![BigUint::from(7u32)]);
        assert!(denominator_profile(2).unwrap().anomalous.is_empty());
        let p6 = denominator_profile(6).unwrap();
        assert_eq!(p6.denominator, BigInt::from(7));
        assert!(p6.anomalous.is_empty());
    }
}
