//! Truncation residual of the convolution identity
//!
//!   π csc(πzx) sec(πx) = 1/(zx) + 8x Σ χ₋₄(n) csc(πnz/2)/(n² − 4x²)
//!                        − 2zx Σ sec(πn(1 + 1/z))/(n² − z²x²).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::eval::working_bits;
use super::series::{Multiples, TrigKind};
use super::{BigReal, NumericError};
use crate::exact::{chi4, QuadSurd, Rational};

/// Slack allowed between successive rungs of the residual ladder:
/// ten times the size 2(8|x| + 2|zx|)/(πN) of the first omitted terms.
pub fn lemma_slack(x: &Rational, z: &QuadSurd, n: u64) -> f64 {
    let xf = x.abs().to_f64().unwrap_or(f64::INFINITY);
    let zx = (z.to_f64() * xf).abs();
    10.0 * (8.0 * xf + 2.0 * zx) * 2.0 / (std::f64::consts::PI * n as f64)
}

/// |LHS − RHS_N| for every N in `ns`, in one pass up to the largest.
pub fn lemma_ladder(x: &Rational, z: &QuadSurd, ns: &[u64], digits: u32) -> Result<Vec<(u64, BigReal)>, NumericError> {
    if x.is_zero() {
        return Err(NumericError::Domain("x must be non-zero".into()));
    }
    if z.is_rational() {
        return Err(NumericError::Domain(format!("{z} must be irrational")));
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let prec = working_bits(digits) + 16;
    let zx = z.scale(x);
    let xb = BigReal::from_rational(x, prec);
    let zxb = BigReal::from_surd(&zx, prec);

    // left-hand side
    let pi = BigReal::pi(prec);
    let cx = pi.mul(&xb).cos();
    if cx.contains_zero() {
        return Err(NumericError::Pole(format!("sec(π·{x})")));
    }
    let csc_zx = Multiples::new(&zx, 1, prec)?.eval(TrigKind::Csc, 1)?;
    let lhs = pi.mul(&csc_zx).div(&cx);

    let half_z = z.scale(&Rational::new(BigInt::from(1), BigInt::from(2)));
    let w = z.inverse()?.add_rational(&Rational::from_integer(BigInt::from(1)));
    let csc_terms = Multiples::new(&half_z, n_max, prec)?;
    let sec_terms = Multiples::new(&w, n_max, prec)?;
    let four_x2 = xb.sqr().mul_2exp(2);
    let zx2 = zxb.sqr();

    let mut s1 = BigReal::zero(prec);
    let mut s2 = BigReal::zero(prec);
    let mut out = Vec::new();
    let mut sorted: Vec<u64> = ns.to_vec();
    sorted.sort_unstable();
    let mut next = sorted.iter().peekable();
    let base = lhs.sub(&zxb.recip());
    for n in 1..=n_max {
        let n2 = BigReal::from_int(n * n, prec);
        let chi = chi4(n);
        if chi != 0 {
            let d1 = n2.sub(&four_x2);
            if d1.contains_zero() {
                return Err(NumericError::Pole(format!("n² − 4x² at n = {n}")));
            }
            let t = csc_terms.eval(TrigKind::Csc, n)?.div(&d1);
            s1 = if chi > 0 { s1.add(&t) } else { s1.sub(&t) };
        }
        let d2 = n2.sub(&zx2);
        if d2.contains_zero() {
            return Err(NumericError::Pole(format!("n² − z²x² at n = {n}")));
        }
        s2 = s2.add(&sec_terms.eval(TrigKind::Sec, n)?.div(&d2));
        while next.peek().is_some_and(|&&m| m == n) {
            let rhs = xb.mul_int(8).mul(&s1).sub(&zxb.mul_int(2).mul(&s2));
            out.push((n, base.sub(&rhs).abs()));
            next.next();
        }
    }
    Ok(out)
}

pub fn lemma_residual(x: &Rational, z: &QuadSurd, n: u64, digits: u32) -> Result<BigReal, NumericError> {
    let mut v = lemma_ladder(x, z, &[n], digits)?;
    v.pop().map(|(_, r)| r).ok_or_else(|| NumericError::Domain("N must be positive".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn residual_is_small_and_slack_positive() {
        let r = lemma_residual(&rat(1, 5), &QuadSurd::sqrt_int(2), 2000, 30).unwrap();
        assert!(r.to_f64() < 1e-3, "{}", r.to_f64());
        assert!(lemma_slack(&rat(1, 5), &QuadSurd::sqrt_int(2), 1000) > 0.0);
        assert!(lemma_residual(&rat(1, 2), &QuadSurd::sqrt_int(2), 10, 20).is_err());
        assert!(lemma_residual(&rat(0, 1), &QuadSurd::sqrt_int(2), 10, 20).is_err());
    }
}
