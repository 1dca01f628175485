//! Rational recognition by continued fractions, and the sweep of
//! ψ_k(√j)/π^k over a grid of (k, j).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::eval::psi_over_pi_power;
use super::{BigReal, Mag};
use crate::exact::{QuadSurd, Rational};

/// 2^{−⌈(digits/2)·log₂10⌉}, which never exceeds 10^{−digits/2}.
fn half_digits_tolerance(digits: u32) -> Mag {
    let bits = (digits as f64 / 2.0 * std::f64::consts::LOG2_10).ceil() as i64;
    Mag::pow2(-bits)
}

fn mag_rational(m: Mag) -> Rational {
    BigReal::from_mag(m, 64).mid_rational()
}

/// Smallest-denominator convergent p/q of the ball midpoint with
/// q ≤ `max_den` and |x − p/q| ≤ rad + `tol`.
///
/// Refuses (returns None) when the radius is at least 1/(2·max_den²),
/// since two fractions with denominators up to max_den can then both fit.
pub fn recognize_with_tolerance(x: &BigReal, max_den: u64, tol: Mag) -> Option<Rational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let md = BigInt::from(max_den);
    let limit = Rational::new(BigInt::one(), &md * &md * 2);
    let rad = mag_rational(x.rad());
    if rad >= limit {
        return None;
    }
    let slack = rad + mag_rational(tol);
    let target = x.mid_rational();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > md {
            return None;
        }
        let cand = Rational::new(p2.clone(), q2.clone());
        if (&target - &cand).abs() <= slack {
            return Some(cand);
        }
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rest = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}

/// [`recognize_with_tolerance`] with tolerance 2^{−prec/2}.
pub fn recognize_rational(x: &BigReal, max_den: u64) -> Option<Rational> {
    recognize_with_tolerance(x, max_den, Mag::pow2(-(x.prec() as i64) / 2))
}

fn ser_opt_display<T: std::fmt::Display, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

fn ser_opt_mag<S: Serializer>(x: &Option<Mag>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(&v.to_sci_string()),
        None => s.serialize_none(),
    }
}

/// One cell of the ψ_k(√j)/π^k sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub k: u32,
    pub j: u64,
    pub digits: u32,
    /// Decimal midpoint of ψ_k(√j)/π^k.
    pub value: String,
    /// Radius of the value enclosure.
    #[serde(serialize_with = "ser_opt_mag")]
    pub radius: Option<Mag>,
    /// Present only when the residual test and the re-verification pass.
    #[serde(serialize_with = "ser_opt_display")]
    pub recognized: Option<Rational>,
    /// The convergent found at `digits`, even if re-verification failed.
    #[serde(serialize_with = "ser_opt_display")]
    pub candidate: Option<Rational>,
    /// Upper bound for |value − candidate|.
    #[serde(serialize_with = "ser_opt_mag")]
    pub residual: Option<Mag>,
    pub verified_at_higher_precision: bool,
    pub error: Option<String>,
}

fn scan_cell(k: u32, j: u64, digits: u32, max_den: u64) -> ScanRecord {
    let mut rec = ScanRecord {
        k,
        j,
        digits,
        value: String::new(),
        radius: None,
        recognized: None,
        candidate: None,
        residual: None,
        verified_at_higher_precision: false,
        error: None,
    };
    if k < 2 || k % 2 == 1 {
        rec.error = Some(format!("k = {k} must be even and at least 2"));
        return rec;
    }
    let z = QuadSurd::sqrt_int(j);
    let v = match psi_over_pi_power(k, &z, digits) {
        Ok(v) => v,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.value = v.mid_to_decimal(digits as usize);
    rec.radius = Some(v.rad());
    let tol = half_digits_tolerance(digits);
    let Some(c) = recognize_with_tolerance(&v, max_den, tol) else {
        return rec;
    };
    let c_ball = BigReal::from_rational(&c, v.prec() + 64);
    rec.residual = Some(v.dist_upper(&c_ball));
    rec.candidate = Some(c.clone());
    let hi = digits + 20;
    match psi_over_pi_power(k, &z, hi) {
        Ok(v2) => {
            let tol2 = half_digits_tolerance(hi);
            let d = v2.dist_upper(&BigReal::from_rational(&c, v2.prec() + 64));
            rec.verified_at_higher_precision = d <= v2.rad().add_up(tol2);
        }
        Err(e) => rec.error = Some(format!("re-verification: {e}")),
    }
    if rec.verified_at_higher_precision {
        rec.recognized = Some(c);
    }
    rec
}

/// Scans every (k, j) cell in parallel; records come back sorted by (k, j).
pub fn conjecture1_scan(ks: &[u32], js: &[u64], digits: u32, max_den: u64) -> Vec<ScanRecord> {
    let mut cells: Vec<(u32, u64)> = ks.iter().flat_map(|&k| js.iter().map(move |&j| (k, j))).collect();
    cells.sort_unstable();
    cells.dedup();
    cells.par_iter().map(|&(k, j)| scan_cell(k, j, digits, max_den)).collect()
}
