//! High-precision evaluation by descent through the transformation laws.
//!
//! ψ_k for even k: fold w into (0, 1) with ψ(−w) = ψ(w) and ψ(w + 2) = ψ(w),
//! then pick M ∈ ⟨A, B⟩ with first column (a, c) such that |a − cw| < 1,
//! and write ψ(w) = α·ψ(M⁻¹w) + ρπ^k with α = (a − cw)^{k−1}. Two column
//! families suffice: (1, 2n) approximates w by 1/(2n), and (2m − 1, 2m)
//! approximates w by 1 − 1/(2m). One of them always reaches |a − cw| ≤ 1/2.
//!
//! ξ_k for odd k: fold w into (0, ½] with ξ(w + 1) = ξ(w) and ξ(−w) = −ξ(w),
//! then ξ(w) = w^{k−1}ξ(−1/w) + P_k(w)π^k.
//!
//! Points stay exact in ℚ(√d); only the accumulated multiplier and
//! constant are balls. When the multiplier is negligible the remaining
//! value is enclosed by a short direct sum with its tail bound.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::series::{direct_sum, Exponent, TrigKind};
use super::{BigReal, Mag, NumericError};
use crate::exact::{bernoulli, QuadSurd, Rational};
use crate::modular::{moebius, push_relation, sanov_factor, Mat2Z};

/// Terms in the closing direct sum.
const CLOSING_LOG2_TERMS: u32 = 10;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Representative of ±w + 2ℤ in [0, 1].
fn fold_even(w: &QuadSurd) -> QuadSurd {
    let half = w.scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    let r = w.add_rational(&-Rational::from_integer(half.floor() * 2));
    if r.cmp_rational(&Rational::one()) == Ordering::Greater {
        (-r).add_rational(&int(2))
    } else {
        r
    }
}

/// The step matrix for a folded point w in (0, 1).
fn step_matrix(w: &QuadSurd) -> Mat2Z {
    let wf = w.to_f64();
    let n = (0.5 / wf).round().max(1.0);
    let cb = (1.0 - 2.0 * n * wf).abs();
    let delta = 1.0 - wf;
    let m = (0.5 / delta).round().max(1.0);
    let cp = (2.0 * m * delta - 1.0).abs();
    if cb <= cp {
        Mat2Z::gen_b(n as i64)
    } else {
        let m = BigInt::from(m as i64);
        let two_m: BigInt = &m * 2;
        Mat2Z::new(&two_m - 1, &two_m - 2, two_m.clone(), &two_m - 1).expect("determinant one")
    }
}

type Key = (Rational, Rational);

fn key(w: &QuadSurd) -> Key {
    (w.a().clone(), w.b().clone())
}

struct Step {
    next: QuadSurd,
    alpha: QuadSurd,
    rho: QuadSurd,
}

/// ψ_k(z)/π^k for even k ≥ 2 at a quadratic irrational z.
pub fn psi_descent(k: u64, z: &QuadSurd, prec: u32) -> Result<BigReal, NumericError> {
    if k < 2 || k % 2 == 1 {
        return Err(NumericError::Domain(format!("descent needs even k ≥ 2, got {k}")));
    }
    if z.is_rational() {
        return Err(NumericError::Domain(format!("{z} is rational")));
    }
    let wp = prec + 32;
    let stop = Mag::pow2(-(wp as i64) - 16);
    let max_steps = 4 * wp as usize + 64;
    let mut cache: HashMap<Key, Step> = HashMap::new();
    let mut w = fold_even(z);
    let mut mult = BigReal::one(wp);
    let mut acc = BigReal::zero(wp);
    for _ in 0..max_steps {
        if mult.abs_upper() < stop {
            break;
        }
        let entry = match cache.entry(key(&w)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                let m = step_matrix(&w);
                let prev = moebius(&m.inverse(), &w)?;
                let word = sanov_factor(&m)?;
                let rel = push_relation(k, &word, &prev)?;
                debug_assert!(rel.image == w);
                e.insert(Step { next: fold_even(&prev), alpha: rel.alpha, rho: rel.rho })
            }
        };
        acc = acc.add(&mult.mul(&BigReal::from_surd(&entry.rho, wp)));
        mult = mult.mul(&BigReal::from_surd(&entry.alpha, wp));
        w = entry.next.clone();
    }
    if mult.abs_upper() >= stop {
        return Err(NumericError::Precision(format!("descent for ψ_{k}({z}) did not contract")));
    }
    let tail = direct_sum(TrigKind::Sec, Exponent::Int(k as u32), &w, CLOSING_LOG2_TERMS, 64)?
        .div(&BigReal::pi(64).powi(k as i64));
    Ok(acc.add(&mult.mul(&tail)).with_prec(prec))
}

/// P_k(w) in ξ_k(w) = w^{k−1}ξ_k(−1/w) + P_k(w)π^k, for odd k ≥ 3:
/// P_k(w) = −(1/(2w))(−1)^M 4^M Σ_{j=0}^{M} B_{2j}B_{2M−2j} w^{2M−2j}/((2j)!(2M−2j)!)
/// with M = (k + 1)/2.
pub fn cot_law_polynomial(k: u64, w: &QuadSurd) -> Result<QuadSurd, NumericError> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(NumericError::Domain(format!("cotangent law needs odd k ≥ 3, got {k}")));
    }
    let big_m = k.div_ceil(2);
    let mut fact = vec![BigInt::one()];
    for i in 1..=2 * big_m {
        let f = &fact[i as usize - 1] * i;
        fact.push(f);
    }
    let mut sum = QuadSurd::zero();
    let mut wpow = vec![QuadSurd::one()];
    for i in 1..=2 * big_m as usize {
        wpow.push(wpow[i - 1].checked_mul(w)?);
    }
    for j in 0..=big_m {
        let c = bernoulli(2 * j) * bernoulli(2 * big_m - 2 * j)
            / Rational::from_integer(&fact[2 * j as usize] * &fact[(2 * big_m - 2 * j) as usize]);
        sum = sum.checked_add(&wpow[(2 * big_m - 2 * j) as usize].scale(&c))?;
    }
    let sign = if big_m.is_multiple_of(2) { -1 } else { 1 };
    let scale = Rational::from_integer(BigInt::from(sign) * (BigInt::one() << (2 * big_m) as usize));
    let half_inv = w.scale(&int(2)).inverse()?;
    Ok(sum.checked_mul(&half_inv)?.scale(&scale))
}

/// ξ_k(z)/π^k for odd k ≥ 3 at a quadratic irrational z.
pub fn cot_descent(k: u64, z: &QuadSurd, prec: u32) -> Result<BigReal, NumericError> {
    if z.is_rational() {
        return Err(NumericError::Domain(format!("{z} is rational")));
    }
    let wp = prec + 32;
    let stop = Mag::pow2(-(wp as i64) - 16);
    let max_steps = 4 * wp as usize + 64;
    let mut cache: HashMap<Key, (QuadSurd, QuadSurd, QuadSurd)> = HashMap::new();
    let mut mult = BigReal::one(wp);
    let mut acc = BigReal::zero(wp);
    let mut w = z.clone();
    let fold = |w: &QuadSurd| -> (QuadSurd, bool) {
        let e = w.add_rational(&-Rational::from_integer(w.round_half_down()));
        if e.signum() == Ordering::Less {
            (-e, true)
        } else {
            (e, false)
        }
    };
    for _ in 0..max_steps {
        let (e, flip) = fold(&w);
        if flip {
            mult = mult.neg();
        }
        w = e;
        if mult.abs_upper() < stop {
            break;
        }
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key(&w)) {
            let p = cot_law_polynomial(k, &w)?;
            let factor = w.pow(k as i64 - 1)?;
            let next = w.inverse()?.scale(&int(-1));
            e.insert((p, factor, next));
        }
        let (p, factor, next) = &cache[&key(&w)];
        acc = acc.add(&mult.mul(&BigReal::from_surd(p, wp)));
        mult = mult.mul(&BigReal::from_surd(factor, wp));
        w = next.clone();
    }
    if mult.abs_upper() >= stop {
        return Err(NumericError::Precision(format!("descent for ξ_{k}({z}) did not contract")));
    }
    let tail = direct_sum(TrigKind::Cot, Exponent::Int(k as u32), &w, CLOSING_LOG2_TERMS, 64)?
        .div(&BigReal::pi(64).powi(k as i64));
    Ok(acc.add(&mult.mul(&tail)).with_prec(prec))
}
