//! Exact arithmetic: rationals, elements of real quadratic fields, and the
//! Bernoulli/Euler number tables everything else is built on.

mod numbers;
pub mod primes;
mod surd;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use numbers::{bernoulli, euler_number, von_staudt_fraction};
pub use surd::QuadSurd;

/// Arbitrary-precision exact fraction, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("index {0} must be even")]
    OddIndex(u64),
    #[error("index must be at least {min}, got {got}")]
    IndexTooSmall { min: u64, got: u64 },
    #[error("radicands differ: √{0} vs √{1}")]
    RadicandMismatch(u64, u64),
    #[error("radicand {0} is negative")]
    NegativeRadicand(String),
    #[error("radicand {0} does not fit in 64 bits")]
    RadicandOverflow(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Binomial coefficient C(k, m); zero outside `0 <= m <= k`.
pub fn binomial(k: u64, m: i64) -> BigInt {
    if m < 0 || m as u64 > k {
        return BigInt::zero();
    }
    let m = (m as u64).min(k - m as u64);
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= k - i;
        acc /= i + 1;
    }
    acc
}

/// The non-principal character modulo 4.
pub fn chi4(n: u64) -> i8 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(k: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..k {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        for k in 0..40u64 {
            let row = pascal(k as usize);
            for m in 0..=k as i64 {
                assert_eq!(binomial(k, m), row[m as usize], "C({k},{m})");
            }
            assert!(binomial(k, -1).is_zero());
            assert!(binomial(k, k as i64 + 1).is_zero());
        }
        assert_eq!(binomial(20, 10), BigInt::from(184756));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
    }

    #[test]
    fn chi4_values() {
        assert_eq!(chi4(1), 1);
        assert_eq!(chi4(2), 0);
        assert_eq!(chi4(7), -1);
        assert_eq!(chi4(9), 1);
    }
}
