//! Continued fractions of quadratic surds, Pell's equation, and the
//! distance of nz to the half-integers that controls |sec(πnz)|.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::primes::is_perfect_square_u64;
use crate::exact::{QuadSurd, Rational};
use crate::numeric::BigReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("{0} is rational and has a finite continued fraction")]
    RationalInput(String),
    #[error("Pell's equation needs a non-square j >= 2, got {0}")]
    NotPellParameter(u64),
    #[error("gap for n = {n} cannot be separated from zero at {bits} bits")]
    PrecisionFailure { n: u64, bits: u32 },
    #[error("worley threshold k must be at least 1/2")]
    ThresholdTooSmall,
}

/// Continued fraction [a0; prefix, period, period, ...].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFrac {
    pub a0: BigInt,
    pub prefix: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

impl CFrac {
    /// Partial quotient a_i (a_0 for i = 0).
    pub fn term(&self, i: usize) -> BigInt {
        if i == 0 {
            return self.a0.clone();
        }
        let i = i - 1;
        if i < self.prefix.len() {
            return self.prefix[i].clone();
        }
        if self.period.is_empty() {
            panic!("index {} beyond a finite expansion", i + 1);
        }
        self.period[(i - self.prefix.len()) % self.period.len()].clone()
    }

    /// First `count` convergents p_i/q_i.
    pub fn convergents(&self, count: usize) -> Vec<Convergent> {
        let mut out = Vec::with_capacity(count);
        let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        for i in 0..count {
            let a = self.term(i);
            let p = &a * &p1 + &p0;
            let q = &a * &q1 + &q0;
            out.push(Convergent { p: p.clone(), q: q.clone(), index: i });
            p0 = std::mem::replace(&mut p1, p);
            q0 = std::mem::replace(&mut q1, q);
        }
        out
    }
}

/// floor((p + √d)/q) for non-square d and q != 0.
fn floor_quadratic(p: &BigInt, d: &BigInt, q: &BigInt) -> BigInt {
    let s = d.sqrt();
    if q.is_positive() {
        (p + &s).div_floor(q)
    } else {
        // (p + √d)/q = -(p + √d)/|q|, and the inner value is irrational
        -((p + &s).div_floor(&-q)) - 1
    }
}

/// Exact continued fraction of an irrational quadratic surd.
pub fn cfrac_of_surd(z: &QuadSurd) -> Result<CFrac, DiophantineError> {
    if z.is_rational() {
        return Err(DiophantineError::RationalInput(z.to_string()));
    }
    // z = (A + B√d)/L with integers, L > 0
    let l = z.a().denom().lcm(z.b().denom());
    let lr = Rational::from_integer(l.clone());
    let big_a = (z.a() * &lr).to_integer();
    let big_b = (z.b() * &lr).to_integer();
    // rewrite as (P + √D)/Q with Q | D - P²
    let mut dd = &big_b * &big_b * BigInt::from(z.radicand());
    let (mut p, mut q) = if big_b.is_positive() { (big_a, l) } else { (-big_a, -l) };
    if !(&dd - &p * &p).is_multiple_of(&q) {
        let aq = q.abs();
        p *= &aq;
        dd *= &aq * &aq;
        q *= aq;
    }
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let a0 = terms[0].clone();
            let rest: Vec<BigInt> = terms[1..].to_vec();
            let prefix = rest[..start - 1].to_vec();
            let period = rest[start - 1..].to_vec();
            return Ok(CFrac { a0, prefix, period });
        }
        // the state before producing term i; term 0 is never periodic
        if !terms.is_empty() {
            seen.insert((p.clone(), q.clone()), terms.len());
        }
        let a = floor_quadratic(&p, &dd, &q);
        p = &a * &q - &p;
        q = (&dd - &p * &p) / &q;
        terms.push(a);
    }
}

fn pell_check(j: u64) -> Result<(), DiophantineError> {
    if j < 2 || is_perfect_square_u64(j) {
        return Err(DiophantineError::NotPellParameter(j));
    }
    Ok(())
}

/// Least positive solution of X² − jY² = 1, read off the convergents of
/// √j (it appears within the first two periods).
pub fn pell_fundamental(j: u64) -> Result<(BigInt, BigInt), DiophantineError> {
    pell_check(j)?;
    let cf = cfrac_of_surd(&QuadSurd::sqrt_int(j))?;
    let jb = BigInt::from(j);
    let len = 2 * (cf.prefix.len() + cf.period.len()) + 2;
    cf.convergents(len)
        .into_iter()
        .find(|c| &c.p * &c.p - &jb * &c.q * &c.q == BigInt::one())
        .map(|c| (c.p, c.q))
        .ok_or(DiophantineError::NotPellParameter(j))
}

/// First `count` solutions, by powers of the fundamental unit.
pub fn pell_solutions(j: u64, count: usize) -> Result<Vec<(BigInt, BigInt)>, DiophantineError> {
    let (x1, y1) = pell_fundamental(j)?;
    let jb = BigInt::from(j);
    let mut out = Vec::with_capacity(count);
    let (mut x, mut y) = (x1.clone(), y1.clone());
    for _ in 0..count {
        out.push((x.clone(), y.clone()));
        let nx = &x1 * &x + &jb * &y1 * &y;
        let ny = &x1 * &y + &y1 * &x;
        x = nx;
        y = ny;
    }
    Ok(out)
}

/// (k_n, |nz − 1/2 − k_n|) with k_n the nearest integer to nz − 1/2,
/// ties toward the smaller one.
pub fn nearest_half_integer_gap(z: &QuadSurd, n: u64, digits: u32) -> Result<(BigInt, BigReal), DiophantineError> {
    let bits = digits_to_bits(digits);
    let shifted = z
        .scale(&Rational::from_integer(BigInt::from(n)))
        .add_rational(&Rational::new(BigInt::from(-1), BigInt::from(2)));
    let k = shifted.round_half_down();
    let diff = shifted.add_rational(&-Rational::from_integer(k.clone()));
    let gap = BigReal::from_surd(&diff, bits).abs();
    if diff.is_zero() || !gap.is_positive() {
        return Err(DiophantineError::PrecisionFailure { n, bits });
    }
    Ok((k, gap))
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Threshold scale·(ln n)^power / n below which an index counts as hard.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardThreshold {
    pub scale: f64,
    pub power: i32,
}

impl Default for HardThreshold {
    fn default() -> Self {
        HardThreshold { scale: 1.0, power: 2 }
    }
}

impl HardThreshold {
    pub fn at(&self, n: u64) -> f64 {
        self.scale * (n as f64).ln().powi(self.power) / n as f64
    }
}

/// Indices n in [2, N] where nz comes within the threshold of a
/// half-integer, so sec(πnz) can be large. n = 1 is never hard.
pub fn hard_indices(z: &QuadSurd, big_n: u64) -> Vec<u64> {
    hard_indices_with(z, big_n, HardThreshold::default())
}

pub fn hard_indices_with(z: &QuadSurd, big_n: u64, threshold: HardThreshold) -> Vec<u64> {
    (2..=big_n)
        .filter(|&n| match nearest_half_integer_gap(z, n, 30) {
            Ok((_, gap)) => gap.to_f64() < threshold.at(n),
            Err(_) => true,
        })
        .collect()
}

/// Fractions (a·p_ℓ + b·p_{ℓ−1})/(a·q_ℓ + b·q_{ℓ−1}) with |a|, |b| < 2k,
/// plus the unit pairs that give the convergents themselves; reduced,
/// positive denominators, deduplicated and sorted by value.
pub fn worley_candidates(z: &QuadSurd, ell: usize, k: &Rational) -> Result<Vec<Rational>, DiophantineError> {
    if k < &Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(DiophantineError::ThresholdTooSmall);
    }
    let conv = cfrac_of_surd(z)?.convergents(ell + 1);
    let (p1, q1) = (&conv[ell].p, &conv[ell].q);
    let (p0, q0) =
        if ell == 0 { (BigInt::one(), BigInt::zero()) } else { (conv[ell - 1].p.clone(), conv[ell - 1].q.clone()) };
    let two_k = k * Rational::from_integer(BigInt::from(2));
    let reach = two_k.ceil().to_integer().to_i64().expect("threshold fits in i64");
    let mut out = BTreeSet::new();
    for a in -reach..=reach {
        for b in -reach..=reach {
            let inside = Rational::from_integer(BigInt::from(a.abs().max(b.abs()))) < two_k;
            let unit = a.abs() + b.abs() == 1;
            if (a == 0 && b == 0) || !(inside || unit) {
                continue;
            }
            let den = q1 * a + &q0 * b;
            if !den.is_positive() {
                continue;
            }
            out.insert(Rational::new(p1 * a + &p0 * b, den));
        }
    }
    Ok(out.into_iter().collect())
}

/// Upper bound for |sec(πnz)|: with t the gap to the nearest half-integer,
/// |sec(πnz)| = 1/sin(πt) <= 1/(2t) since sin(πt) >= 2t on [0, 1/2].
pub fn sec_magnitude_bound(z: &QuadSurd, n: u64, digits: u32) -> Result<BigReal, DiophantineError> {
    let (_, gap) = nearest_half_integer_gap(z, n, digits)?;
    let bound = gap.mul_2exp(1).recip();
    Ok(BigReal::from_mag(bound.abs_upper(), bound.prec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn golden() -> QuadSurd {
        QuadSurd::new(rat(1, 2), rat(1, 2), 5)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classical_expansions() {
        let r2 = cfrac_of_surd(&QuadSurd::sqrt_int(2)).unwrap();
        assert_eq!((r2.a0.clone(), r2.prefix.clone(), r2.period.clone()), (BigInt::from(1), vec![], ints(&[2])));
        let phi = cfrac_of_surd(&golden()).unwrap();
        assert_eq!(phi.a0, BigInt::from(1));
        assert_eq!(phi.period, ints(&[1]));
        let r6 = cfrac_of_surd(&QuadSurd::sqrt_int(6)).unwrap();
        assert_eq!(r6.a0, BigInt::from(2));
        assert_eq!(r6.period, ints(&[2, 4]));
        assert!(cfrac_of_surd(&QuadSurd::from_int(3)).is_err());
    }

    #[test]
    fn expansion_with_prefix_and_negative_surd() {
        // (3 - √7)/2 ≈ 0.1771; its reciprocal is 3 + √7
        let z = QuadSurd::new(rat(3, 2), rat(-1, 2), 7);
        let cf = cfrac_of_surd(&z).unwrap();
        assert_eq!(cf.a0, BigInt::from(0));
        let c = cf.convergents(25);
        let last = c.last().unwrap().value();
        assert!((z.to_f64() - last.to_f64().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn convergents_of_sqrt2_and_golden() {
        let c = cfrac_of_surd(&QuadSurd::sqrt_int(2)).unwrap().convergents(3);
        let pairs: Vec<(i64, i64)> = c.iter().map(|c| (c.p.to_i64().unwrap(), c.q.to_i64().unwrap())).collect();
        assert_eq!(pairs, vec![(1, 1), (3, 2), (7, 5)]);
        let g = cfrac_of_surd(&golden()).unwrap().convergents(5);
        let fib = [1i64, 1, 2, 3, 5, 8];
        for (i, c) in g.iter().enumerate() {
            assert_eq!(c.p, BigInt::from(fib[i + 1]));
            assert_eq!(c.q, BigInt::from(fib[i]));
        }
    }

    #[test]
    fn pell_examples() {
        assert_eq!(pell_fundamental(2).unwrap(), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(pell_fundamental(6).unwrap(), (BigInt::from(5), BigInt::from(2)));
        assert!(pell_fundamental(4).is_err());
        assert!(pell_fundamental(1).is_err());
        let s = pell_solutions(2, 2).unwrap();
        assert_eq!(s[1], (BigInt::from(17), BigInt::from(12)));
        let s = pell_solutions(6, 2).unwrap();
        assert_eq!(s[1], (BigInt::from(49), BigInt::from(20)));
        // j with a square factor
        assert_eq!(pell_fundamental(8).unwrap(), (BigInt::from(3), BigInt::from(1)));
        assert_eq!(pell_fundamental(12).unwrap(), (BigInt::from(7), BigInt::from(2)));
    }

    #[test]
    fn half_integer_gap_examples() {
        let r2 = QuadSurd::sqrt_int(2);
        let (k1, g1) = nearest_half_integer_gap(&r2, 1, 30).unwrap();
        assert_eq!(k1, BigInt::from(1));
        assert!((g1.to_f64() - (2f64.sqrt() - 1.5).abs()).abs() < 1e-15);
        let (k2, g2) = nearest_half_integer_gap(&r2, 2, 30).unwrap();
        assert_eq!(k2, BigInt::from(2));
        assert!((g2.to_f64() - 0.328427).abs() < 1e-6);
        // rational ties go to the smaller integer
        let (k, g) = nearest_half_integer_gap(&QuadSurd::from_int(1), 1, 30).unwrap();
        assert_eq!(k, BigInt::zero());
        assert_eq!(g.to_f64(), 0.5);
        let half = QuadSurd::rational(rat(1, 2));
        assert!(nearest_half_integer_gap(&half, 1, 30).is_err());
    }

    #[test]
    fn sec_bound_dominates() {
        let r2 = QuadSurd::sqrt_int(2);
        let u = sec_magnitude_bound(&r2, 1, 50).unwrap();
        assert!(u.to_f64() < 10.0);
        let truth = 1.0 / (std::f64::consts::PI * 2f64.sqrt()).cos().abs();
        assert!(u.to_f64() >= truth);
    }
}
