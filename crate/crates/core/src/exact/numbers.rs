use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::primes::is_prime_u64;
use super::{rat, ExactError, Rational};

/// Zigzag (up/down) numbers from the Seidel–Entringer boustrophedon.
/// Even indices are the secant numbers |E_2n|, odd ones the tangent numbers.
struct Zigzag {
    values: Vec<BigInt>,
    last_row: Vec<BigInt>,
}

impl Zigzag {
    fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            let mut row = Vec::with_capacity(m + 1);
            row.push(BigInt::zero());
            for k in 1..=m {
                let next = &row[k - 1] + &self.last_row[m - k];
                row.push(next);
            }
            self.values.push(row[m].clone());
            self.last_row = row;
        }
    }
}

fn zigzag_table() -> &'static RwLock<Zigzag> {
    static TABLE: OnceLock<RwLock<Zigzag>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Zigzag { values: vec![BigInt::one()], last_row: vec![BigInt::one()] }))
}

fn zigzag(n: usize) -> BigInt {
    let table = zigzag_table();
    {
        let read = table.read().expect("zigzag cache poisoned");
        if let Some(v) = read.values.get(n) {
            return v.clone();
        }
    }
    let mut write = table.write().expect("zigzag cache poisoned");
    write.extend_to(n);
    write.values[n].clone()
}

fn bernoulli_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![rat(1, 1), rat(-1, 2)]))
}

fn bernoulli_even_from_tangent(m: usize) -> Rational {
    let n = m / 2;
    let four_n = BigInt::one() << (2 * n);
    let num = BigInt::from(2 * n as u64) * zigzag(2 * n - 1);
    let den = &four_n * (&four_n - 1u32);
    let b = Rational::new(num, den);
    if n % 2 == 1 {
        b
    } else {
        -b
    }
}

/// Bernoulli number B_m with the convention B_1 = -1/2.
pub fn bernoulli(m: u64) -> Rational {
    let m = m as usize;
    if m >= 3 && m % 2 == 1 {
        return Rational::zero();
    }
    let cache = bernoulli_cache();
    {
        let read = cache.read().expect("bernoulli cache poisoned");
        if let Some(v) = read.get(m) {
            return v.clone();
        }
    }
    let mut write = cache.write().expect("bernoulli cache poisoned");
    while write.len() <= m {
        let idx = write.len();
        let value = if idx % 2 == 1 { Rational::zero() } else { bernoulli_even_from_tangent(idx) };
        write.push(value);
    }
    write[m].clone()
}

/// Euler number E_m, the coefficients of sec(πx) = Σ E_m (πix)^m / m!.
pub fn euler_number(m: u64) -> BigInt {
    if m % 2 == 1 {
        return BigInt::zero();
    }
    let secant = zigzag(m as usize);
    if (m / 2).is_multiple_of(2) {
        secant
    } else {
        -secant
    }
}

/// Σ 1/p over the primes p with (p - 1) | k.
pub fn von_staudt_fraction(k: u64) -> Result<Rational, ExactError> {
    if k % 2 == 1 {
        return Err(ExactError::OddIndex(k));
    }
    if k < 2 {
        return Err(ExactError::IndexTooSmall { min: 2, got: k });
    }
    let mut divisors = std::collections::BTreeSet::new();
    let mut d = 1u64;
    while d * d <= k {
        if k.is_multiple_of(d) {
            divisors.insert(d);
            divisors.insert(k / d);
        }
        d += 1;
    }
    Ok(divisors.into_iter().filter(|&d| is_prime_u64(d + 1)).map(|d| rat(1, (d + 1) as i64)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use num_integer::Integer;

    /// Akiyama–Tanigawa; produces B_1 = +1/2, which is flipped afterwards.
    fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n + 1);
        let mut a: Vec<Rational> = Vec::new();
        for m in 0..=n {
            a.push(rat(1, (m + 1) as i64));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * rat(j as i64, 1);
            }
            out.push(a[0].clone());
        }
        out[1] = -out[1].clone();
        out
    }

    /// Reciprocal of the cosine power series Σ (-1)^n y^(2n)/(2n)!, by
    /// long division of power series.
    fn secant_series(n: usize) -> Vec<Rational> {
        let mut cos = vec![Rational::zero(); n + 1];
        let mut fact = BigInt::one();
        for i in 0..=n {
            if i > 0 {
                fact *= i;
            }
            if i % 2 == 0 {
                let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
                cos[i] = Rational::new(BigInt::from(sign), fact.clone());
            }
        }
        let mut sec = vec![Rational::zero(); n + 1];
        sec[0] = Rational::one();
        for i in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=i {
                acc += &cos[j] * &sec[i - j];
            }
            sec[i] = -acc;
        }
        sec
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_akiyama_tanigawa() {
        let oracle = akiyama_tanigawa(60);
        for (m, expected) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(m as u64), expected, "B_{m}");
        }
    }

    #[test]
    fn bernoulli_defining_recurrence() {
        for m in 1..=60u64 {
            let mut acc = Rational::zero();
            for j in 0..=m {
                acc += Rational::from_integer(binomial(m + 1, j as i64)) * bernoulli(j);
            }
            assert!(acc.is_zero(), "recurrence fails at m = {m}");
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_number(0), BigInt::from(1));
        assert_eq!(euler_number(1), BigInt::from(0));
        assert_eq!(euler_number(2), BigInt::from(-1));
        assert_eq!(euler_number(4), BigInt::from(5));
        assert_eq!(euler_number(6), BigInt::from(-61));
    }

    #[test]
    fn euler_matches_series_division() {
        // sec(y) = Σ (-1)^n E_2n y^2n/(2n)!; the coefficients of y^m are
        // E_m · i^m / m! with i^m = (-1)^(m/2).
        let sec = secant_series(60);
        let mut fact = BigInt::one();
        for m in 0..=60u64 {
            if m > 0 {
                fact *= m;
            }
            let sign: i64 = if m % 2 == 1 {
                0
            } else if (m / 2) % 2 == 0 {
                1
            } else {
                -1
            };
            let expected = Rational::new(euler_number(m) * sign, fact.clone());
            assert_eq!(sec[m as usize], expected, "E_{m}");
        }
    }

    #[test]
    fn euler_even_recurrence() {
        for m in (2..=60u64).step_by(2) {
            let mut acc = BigInt::zero();
            for j in (0..=m).step_by(2) {
                acc += binomial(m, j as i64) * euler_number(j);
            }
            assert!(acc.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn von_staudt_examples() {
        assert_eq!(von_staudt_fraction(2).unwrap(), rat(5, 6));
        assert_eq!(von_staudt_fraction(4).unwrap(), rat(31, 30));
        assert_eq!(von_staudt_fraction(12).unwrap().denom(), &BigInt::from(2730));
        assert_eq!(von_staudt_fraction(3), Err(ExactError::OddIndex(3)));
    }

    #[test]
    fn von_staudt_clausen_holds() {
        for k in (2..=60u64).step_by(2) {
            let s = bernoulli(k) + von_staudt_fraction(k).unwrap();
            assert!(s.is_integer(), "B_{k} + Σ 1/p = {s}");
            // Only primes with (p - 1) | k may divide the denominator.
            let den = bernoulli(k).denom().clone();
            assert_eq!(den, von_staudt_fraction(k).unwrap().denom().clone());
            assert!(den.is_even());
        }
    }

    #[test]
    fn concurrent_readers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || (0..80u64).rev().map(|m| bernoulli(m + t)).collect::<Vec<_>>().len()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 80);
        }
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }
}
