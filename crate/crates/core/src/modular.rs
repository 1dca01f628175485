//! The free group ⟨A, B⟩ with A = [[1,2],[0,1]], B = [[1,0],[2,1]], its
//! action on ℚ(√d), and exact propagation of the transformation laws
//!
//!   ψ_k(Az) = ψ_k(z),
//!   ψ_k(Bz) = (2z+1)^{1−k} ψ_k(z) + F_k(z)·π^k
//!
//! along words in the generators.
//!
//! A word g₁g₂…g_r acts as g₁∘g₂∘…∘g_r: the rightmost letter is applied to
//! the point first. For example `A^1 B^1` sends z to B(z) + 2.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::diophantine::{pell_fundamental, pell_solutions, DiophantineError};
use crate::exact::{bernoulli, binomial, euler_number, ExactError, QuadSurd, Rational};

/// Pell solutions scanned by [`fixed_point_matrix`] before giving up.
pub const PELL_SCAN_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(BigInt),
    #[error("weight k = {0} must be even and at least 2")]
    BadWeight(u64),
    #[error("pole: {what} vanishes after applying {applied} to {point}")]
    Pole { what: String, applied: String, point: String },
    #[error("{0} is not in the subgroup generated by A and B")]
    NotInSubgroup(String),
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error("no factorable Pell matrix for j = {j} among {} solutions", log.len())]
    NoFactorableSolution { j: u64, log: Vec<String> },
    #[error("relation is degenerate (alpha = 1)")]
    Degenerate,
    #[error("{point} is not fixed by the relation matrix")]
    NotFixed { point: String },
    #[error("solved value {0} is not rational")]
    NotRational(String),
    #[error("{0} is rational; a hyperbolic fixed point needs an irrational argument")]
    RationalPoint(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
}

/// 2×2 integer matrix of determinant 1.
///
/// Entries are kept exactly as computed; equality and hashing treat M and
/// −M as the same element of PSL₂(ℤ).
#[derive(Clone, Debug)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new<T: Into<BigInt>>(a: T, b: T, c: T, d: T) -> Result<Self, ModularError> {
        let m = Mat2Z { a: a.into(), b: b.into(), c: c.into(), d: d.into() };
        let det = m.det();
        if det.is_one() {
            Ok(m)
        } else {
            Err(ModularError::NotUnimodular(det))
        }
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// A^n = [[1, 2n], [0, 1]].
    pub fn gen_a(n: i64) -> Self {
        Self::raw(BigInt::one(), BigInt::from(2 * n), BigInt::zero(), BigInt::one())
    }

    /// B^n = [[1, 0], [2n, 1]].
    pub fn gen_b(n: i64) -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::from(2 * n), BigInt::one())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        Self::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inverse(&self) -> Mat2Z {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Mat2Z {
        Self::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Representative with a > 0, or a = 0 and b > 0.
    pub fn canonical(&self) -> Mat2Z {
        let flip = self.a.is_negative() || (self.a.is_zero() && self.b.is_negative());
        if flip {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Membership in Γ(2): a, d odd and b, c even.
    pub fn in_gamma2(&self) -> bool {
        self.a.is_odd() && self.d.is_odd() && self.b.is_even() && self.c.is_even()
    }

    pub fn max_norm_bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl PartialEq for Mat2Z {
    fn eq(&self, other: &Self) -> bool {
        let (x, y) = (self.canonical(), other.canonical());
        x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d
    }
}

impl Eq for Mat2Z {}

impl Hash for Mat2Z {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let m = self.canonical();
        (m.a, m.b, m.c, m.d).hash(state);
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::A => "A",
            Gen::B => "B",
        })
    }
}

/// Reduced word in A and B: adjacent letters use different generators and
/// every exponent is non-zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenWord {
    letters: Vec<(Gen, i64)>,
}

impl GenWord {
    pub fn identity() -> Self {
        GenWord { letters: Vec::new() }
    }

    /// Builds a reduced word, merging runs and dropping zero exponents.
    pub fn new<I: IntoIterator<Item = (Gen, i64)>>(letters: I) -> Self {
        let mut w = GenWord::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    /// Appends g^e on the right, keeping the word reduced.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((g, e)),
        }
    }

    pub fn letters(&self) -> &[(Gen, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Σ |exponent|, the number of unit steps the word takes.
    pub fn total_steps(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> GenWord {
        GenWord::new(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        GenWord::new(self.letters.iter().chain(other.letters.iter()).copied())
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.letters.iter().map(|(g, e)| format!("{g}^{e}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// (az + b)/(cz + d) in ℚ(√d).
pub fn moebius(m: &Mat2Z, z: &QuadSurd) -> Result<QuadSurd, ModularError> {
    let num = z.scale(&Rational::from_integer(m.a.clone())).add_rational(&Rational::from_integer(m.b.clone()));
    let den = z.scale(&Rational::from_integer(m.c.clone())).add_rational(&Rational::from_integer(m.d.clone()));
    if den.is_zero() {
        return Err(ModularError::Pole { what: "cz + d".into(), applied: m.to_string(), point: z.to_string() });
    }
    Ok(num.checked_div(&den)?)
}

pub fn word_to_matrix(w: &GenWord) -> Mat2Z {
    w.letters.iter().fold(Mat2Z::identity(), |acc, &(g, e)| {
        acc.mul(&match g {
            Gen::A => Mat2Z::gen_a(e),
            Gen::B => Mat2Z::gen_b(e),
        })
    })
}

/// Nearest integer to n/d; callers guarantee no ties.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

fn to_exp(x: BigInt) -> Result<i64, ModularError> {
    x.to_i64().ok_or(ModularError::ExponentOverflow)
}

/// Word w with word_to_matrix(w) = ±M, or `NotInSubgroup`.
///
/// Column reduction: while c ≠ 0, left-multiply by the power of A or B
/// that brings the larger of |a|, |c| below the other. Parity (a odd, c
/// even) rules out ties and makes every step strict, so the loop ends at
/// ±A^n. The image of ⟨A, B⟩ in PSL₂(ℤ) is exactly that of Γ(2), so the
/// parity test decides membership.
pub fn sanov_factor(m: &Mat2Z) -> Result<GenWord, ModularError> {
    if !m.det().is_one() {
        return Err(ModularError::NotUnimodular(m.det()));
    }
    if !m.in_gamma2() {
        return Err(ModularError::NotInSubgroup(m.to_string()));
    }
    let (mut a, mut b, mut c, mut d) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());
    let mut peeled: Vec<(Gen, i64)> = Vec::new();
    let cap = 10 * m.max_norm_bits() + 10;
    let mut steps = 0u64;
    while !c.is_zero() {
        steps += 1;
        if steps > cap {
            return Err(ModularError::NotInSubgroup(m.to_string()));
        }
        if a.abs() > c.abs() {
            let q = -round_div(&a, &(&c * 2));
            a += &q * &c * 2;
            b += &q * &d * 2;
            peeled.push((Gen::A, to_exp(q)?));
        } else {
            let q = -round_div(&c, &(&a * 2));
            c += &q * &a * 2;
            d += &q * &b * 2;
            peeled.push((Gen::B, to_exp(q)?));
        }
    }
    // now [[a, b], [0, a]] with a = ±1, which is ±A^{ab/2}
    debug_assert!(a.abs().is_one() && a == d);
    let last = to_exp(&a * &b / 2)?;
    let mut w = GenWord::new(peeled.into_iter().map(|(g, e)| (g, -e)));
    w.push(Gen::A, last);
    Ok(w)
}

/// A Pell matrix C = [[X, jY], [Y, X]] in ⟨A, B⟩ fixing √j.
#[derive(Clone, Debug)]
pub struct FixedPointMatrix {
    pub matrix: Mat2Z,
    pub word: GenWord,
    pub pell: (BigInt, BigInt),
    pub scan_log: Vec<String>,
}

/// Scans Pell solutions of X² − jY² = 1 in increasing order and returns
/// the first C = [[X, jY], [Y, X]] that factors over A and B.
pub fn fixed_point_matrix(j: u64) -> Result<FixedPointMatrix, ModularError> {
    let jb = BigInt::from(j);
    let mut log = Vec::new();
    for (x, y) in pell_solutions(j, PELL_SCAN_LIMIT)? {
        let c = Mat2Z::new(x.clone(), &jb * &y, y.clone(), x.clone())?;
        match sanov_factor(&c) {
            Ok(word) => {
                log.push(format!("({x}, {y}): factored as {word}"));
                return Ok(FixedPointMatrix { matrix: c, word, pell: (x, y), scan_log: log });
            }
            Err(e) => log.push(format!("({x}, {y}): {e}")),
        }
    }
    Err(ModularError::NoFactorableSolution { j, log })
}

/// Hyperbolic matrix in ⟨A, B⟩ fixing the quadratic irrational z, with z
/// attracting (|cz + d| > 1).
///
/// For a primitive minimal polynomial ax² + bx + c with discriminant Δ and
/// the fundamental solution of X² − ΔY² = 1, the matrix
/// [[X − bY, −2cY], [2aY, X + bY]] fixes z and always lies in Γ(2).
pub fn automorph(z: &QuadSurd) -> Result<(Mat2Z, GenWord), ModularError> {
    let (pa, pb, pc) = z.minimal_polynomial().ok_or_else(|| ModularError::RationalPoint(z.to_string()))?;
    let disc = &pb * &pb - BigInt::from(4) * &pa * &pc;
    let disc_u = disc.to_u64().ok_or_else(|| ModularError::Exact(ExactError::RadicandOverflow(disc.to_string())))?;
    let (x, y) = pell_fundamental(disc_u)?;
    let m = Mat2Z::new(&x - &pb * &y, -(&pc * &y) * 2, (&pa * &y) * 2, &x + &pb * &y)?;
    let factor = automorphy_factor(&m, z);
    let m = if factor.cmp_rational(&Rational::one()) == Ordering::Greater
        || factor.cmp_rational(&-Rational::one()) == Ordering::Less
    {
        m
    } else {
        m.inverse()
    };
    let w = sanov_factor(&m)?;
    Ok((m, w))
}

/// cz + d.
pub fn automorphy_factor(m: &Mat2Z, z: &QuadSurd) -> QuadSurd {
    z.scale(&Rational::from_integer(m.c.clone())).add_rational(&Rational::from_integer(m.d.clone()))
}

fn check_weight(k: u64) -> Result<(), ModularError> {
    if k < 2 || k % 2 == 1 {
        return Err(ModularError::BadWeight(k));
    }
    Ok(())
}

/// c_m = (2^{m−1} − 1) B_m E_{k−m} C(k, m).
pub fn fe_coefficients(k: u64) -> Vec<(u64, Rational)> {
    (0..=k)
        .filter_map(|m| {
            let two_pow = if m == 0 {
                Rational::new(BigInt::one(), BigInt::from(2))
            } else {
                Rational::from_integer(BigInt::one() << (m - 1) as usize)
            };
            let c = (two_pow - Rational::one())
                * bernoulli(m)
                * Rational::from_integer(euler_number(k - m) * binomial(k, m as i64));
            (!c.is_zero()).then_some((m, c))
        })
        .collect()
}

/// Coefficient of π^k in the B-law:
/// (i^k/k!) Σ_m c_m (z+1)^{k−m} [(2z+1)^{m−k} − (2z+1)^{1−k}].
pub fn fe_rhs(k: u64, z: &QuadSurd) -> Result<QuadSurd, ModularError> {
    check_weight(k)?;
    let two_z1 = z.scale(&Rational::from_integer(BigInt::from(2))).add_rational(&Rational::one());
    if two_z1.is_zero() {
        return Err(ModularError::Pole { what: "2z + 1".into(), applied: "B".into(), point: z.to_string() });
    }
    let inv = two_z1.inverse()?;
    let u = z.add_rational(&Rational::one());
    let mut inv_pow = vec![QuadSurd::one()];
    let mut u_pow = vec![QuadSurd::one()];
    for i in 1..=k as usize {
        inv_pow.push(inv_pow[i - 1].checked_mul(&inv)?);
        u_pow.push(u_pow[i - 1].checked_mul(&u)?);
    }
    let top = &inv_pow[k as usize - 1];
    let mut acc = QuadSurd::zero();
    for (m, c) in fe_coefficients(k) {
        let e = (k - m) as usize;
        let bracket = inv_pow[e].checked_sub(top)?;
        acc = acc.checked_add(&u_pow[e].checked_mul(&bracket)?.scale(&c))?;
    }
    let mut fact = BigInt::one();
    for i in 2..=k {
        fact *= i;
    }
    let sign = if (k / 2).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    Ok(acc.scale(&Rational::new(sign, fact)))
}

/// ψ_k(image) = alpha·ψ_k(point) + rho·π^k, with image = matrix·point.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiRelation {
    pub k: u64,
    pub alpha: QuadSurd,
    pub rho: QuadSurd,
    pub matrix: Mat2Z,
    pub point: QuadSurd,
    pub image: QuadSurd,
}

/// Composes the A- and B-laws along `w`, innermost letter first.
pub fn push_relation(k: u64, w: &GenWord, z: &QuadSurd) -> Result<PsiRelation, ModularError> {
    check_weight(k)?;
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let kk = 1 - k as i64;
    let mut alpha = QuadSurd::one();
    let mut rho = QuadSurd::zero();
    let mut cur = z.clone();
    let mut applied = GenWord::identity();
    for &(g, e) in w.letters.iter().rev() {
        let step = e.signum();
        for _ in 0..e.unsigned_abs() {
            match g {
                Gen::A => cur = cur.add_rational(&(&two * Rational::from_integer(BigInt::from(step)))),
                Gen::B => {
                    // forward: ψ(Bw) = (2w+1)^{1−k}ψ(w) + F(w)π^k
                    // backward: ψ(B⁻¹w) = (1−2w)^{1−k}[ψ(w) − F(B⁻¹w)π^k]
                    let lin = cur.scale(&(&two * Rational::from_integer(BigInt::from(step)))).add_rational(&one);
                    if lin.is_zero() {
                        let mut at = GenWord::new([(g, step)]);
                        at = at.concat(&applied);
                        return Err(ModularError::Pole {
                            what: if step > 0 { "2z + 1".into() } else { "1 − 2z".into() },
                            applied: at.to_string(),
                            point: z.to_string(),
                        });
                    }
                    let factor = lin.pow(kk)?;
                    let next = cur.checked_div(&lin)?;
                    let r = if step > 0 { fe_rhs(k, &cur)? } else { -factor.checked_mul(&fe_rhs(k, &next)?)? };
                    alpha = factor.checked_mul(&alpha)?;
                    rho = factor.checked_mul(&rho)?.checked_add(&r)?;
                    cur = next;
                }
            }
            applied = GenWord::new([(g, step)]).concat(&applied);
        }
    }
    Ok(PsiRelation { k, alpha, rho, matrix: word_to_matrix(w), point: z.clone(), image: cur })
}

/// c = rho/(1 − alpha) in ℚ(√d), so that ψ_k(point) = c·π^k.
pub fn solve_fixed_surd(rel: &PsiRelation) -> Result<QuadSurd, ModularError> {
    let denom = QuadSurd::one().checked_sub(&rel.alpha)?;
    if denom.is_zero() {
        return Err(ModularError::Degenerate);
    }
    if moebius(&rel.matrix, &rel.point)? != rel.point || rel.image != rel.point {
        return Err(ModularError::NotFixed { point: rel.point.to_string() });
    }
    Ok(rel.rho.checked_div(&denom)?)
}

/// As [`solve_fixed_surd`], asserting that the √d-component vanishes.
pub fn solve_fixed(rel: &PsiRelation) -> Result<Rational, ModularError> {
    let c = solve_fixed_surd(rel)?;
    c.to_rational().ok_or_else(|| ModularError::NotRational(c.to_string()))
}

/// Exact ψ_k(z)/π^k at a quadratic irrational, via its automorph.
pub fn psi_exact_at(k: u64, z: &QuadSurd) -> Result<QuadSurd, ModularError> {
    let (_, w) = automorph(z)?;
    solve_fixed_surd(&push_relation(k, &w, z)?)
}

/// Exact ψ_k(√j)/π^k using the Pell matrix of [`fixed_point_matrix`].
pub fn psi_exact_sqrt(k: u64, j: u64) -> Result<QuadSurd, ModularError> {
    let fp = fixed_point_matrix(j)?;
    solve_fixed_surd(&push_relation(k, &fp.word, &QuadSurd::sqrt_int(j))?)
}

/// Linear combination Σ coeff·ψ_k(arg) + constant·π^k.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiExpr {
    pub k: u64,
    pub terms: BTreeMap<SurdKey, Rational>,
    pub constant: Rational,
}

/// QuadSurd wrapper ordered by (d, a, b), for deterministic term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdKey(pub QuadSurd);

impl Ord for SurdKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.radicand(), self.0.a(), self.0.b()).cmp(&(other.0.radicand(), other.0.a(), other.0.b()))
    }
}

impl PartialOrd for SurdKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PsiExpr {
    pub fn single(k: u64, arg: QuadSurd) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SurdKey(arg), Rational::one());
        PsiExpr { k, terms, constant: Rational::zero() }
    }

    fn add_term(&mut self, arg: QuadSurd, c: Rational) {
        let key = SurdKey(arg);
        let v = self.terms.remove(&key).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Evaluates Σ coeff·value(arg) + constant with a caller-supplied
    /// resolver for single values.
    pub fn evaluate<E, F>(&self, mut value: F) -> Result<Rational, E>
    where
        F: FnMut(&QuadSurd) -> Result<Rational, E>,
    {
        let mut acc = self.constant.clone();
        for (arg, c) in &self.terms {
            acc += c * value(&arg.0)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PsiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.terms.iter().map(|(arg, c)| format!("{c}·ψ_{}({})", self.k, arg.0)).collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(format!("{}·π^{}", self.constant, self.k));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Representative of ±z + 2ℤ in [0, 2).
fn reduce_argument(z: &QuadSurd) -> QuadSurd {
    let pos = if z.signum() == Ordering::Less { -z } else { z.clone() };
    let half = pos.scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    pos.add_rational(&-Rational::from_integer(half.floor() * 2))
}

fn has_even_integer_parts(z: &QuadSurd) -> bool {
    let even = |r: &Rational| r.is_integer() && r.to_integer().is_even();
    !z.is_rational() && even(z.a()) && even(z.b())
}

/// Normalizes arguments with ψ(−z) = ψ(z) and ψ(z+2) = ψ(z), and splits
/// ψ(2w) = 2^{k−1}[ψ(w) + ψ(w+1)] whenever the argument has even integer
/// coordinates (so w = arg/2 has integer ones). Arguments end up in [0, 2).
pub fn rewrite_rules(expr: &PsiExpr) -> PsiExpr {
    let mut out = PsiExpr { k: expr.k, terms: BTreeMap::new(), constant: expr.constant.clone() };
    let mut work: Vec<(QuadSurd, Rational)> = expr.terms.iter().map(|(a, c)| (a.0.clone(), c.clone())).collect();
    let dup = Rational::from_integer(BigInt::one() << (expr.k - 1) as usize);
    while let Some((arg, c)) = work.pop() {
        let mut r = reduce_argument(&arg);
        let mut raw = arg.clone();
        if raw.signum() == Ordering::Less {
            raw = -raw;
        }
        // prefer splitting the unreduced argument, then the reduced one
        let split = if has_even_integer_parts(&raw) {
            Some(raw)
        } else if has_even_integer_parts(&r) {
            Some(r.clone())
        } else {
            None
        };
        match split {
            Some(s) => {
                let w = s.scale(&Rational::new(BigInt::one(), BigInt::from(2)));
                work.push((w.add_rational(&Rational::one()), &c * &dup));
                work.push((w, &c * &dup));
            }
            None => {
                if r.is_rational() && r.a().is_zero() {
                    r = QuadSurd::zero();
                }
                out.add_term(r, c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::new(a, b, c, d).unwrap()
    }

    #[test]
    fn moebius_examples() {
        let z = QuadSurd::sqrt_int(2);
        assert_eq!(moebius(&Mat2Z::identity(), &z).unwrap(), z);
        assert_eq!(moebius(&Mat2Z::gen_a(1), &z).unwrap(), z.add_rational(&rat(2, 1)));
        let c = m(3, 4, 2, 3);
        assert_eq!(moebius(&c, &z).unwrap(), z);
        assert!(moebius(&m(1, 0, 2, 1), &QuadSurd::rational(rat(-1, 2))).is_err());
    }

    #[test]
    fn word_matrices() {
        assert_eq!(word_to_matrix(&GenWord::identity()), Mat2Z::identity());
        let b = word_to_matrix(&GenWord::new([(Gen::B, 1)]));
        assert_eq!((b.a.clone(), b.b.clone(), b.c.clone(), b.d.clone()), (1.into(), 0.into(), 2.into(), 1.into()));
        for j in -3i64..=3 {
            for n in -3i64..=3 {
                if j == 0 || n == 0 {
                    continue;
                }
                let w = GenWord::new([(Gen::A, j), (Gen::B, n), (Gen::A, j)]);
                let expected = m(4 * j * n + 1, 4 * j * (2 * j * n + 1), 2 * n, 4 * j * n + 1);
                let got = word_to_matrix(&w);
                assert_eq!((got.a, got.b, got.c, got.d), (expected.a, expected.b, expected.c, expected.d));
            }
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(sanov_factor(&Mat2Z::identity()).unwrap(), GenWord::identity());
        let w = sanov_factor(&m(5, 12, 2, 5)).unwrap();
        assert_eq!(w.to_string(), "A^1 B^1 A^1");
        assert!(matches!(sanov_factor(&m(0, -1, 1, 0)), Err(ModularError::NotInSubgroup(_))));
        assert_eq!(sanov_factor(&m(-1, 0, 0, -1)).unwrap(), GenWord::identity());
    }

    #[test]
    fn fixed_point_examples() {
        let fp = fixed_point_matrix(6).unwrap();
        assert_eq!(fp.matrix, m(5, 12, 2, 5));
        assert_eq!(fp.word.to_string(), "A^1 B^1 A^1");
        let fp2 = fixed_point_matrix(2).unwrap();
        assert_eq!(moebius(&fp2.matrix, &QuadSurd::sqrt_int(2)).unwrap(), QuadSurd::sqrt_int(2));
        assert!(fp2.matrix.det().is_one());
        assert!(!fp2.scan_log.is_empty());
    }

    #[test]
    fn fe_rhs_k2_closed_form() {
        // F_2(z) = z(3z² + 4z + 2)/(6(2z+1)²)
        for (p, q) in [(1, 3), (2, 5), (-3, 7), (5, 1), (0, 1)] {
            let z = rat(p, q);
            let zs = QuadSurd::rational(z.clone());
            let two = rat(2, 1);
            let expected = &z * (rat(3, 1) * &z * &z + rat(4, 1) * &z + &two)
                / (rat(6, 1) * (&two * &z + rat(1, 1)) * (&two * &z + rat(1, 1)));
            assert_eq!(fe_rhs(2, &zs).unwrap().to_rational().unwrap(), expected, "z = {z}");
        }
        assert!(fe_rhs(2, &QuadSurd::zero()).unwrap().is_zero());
        assert!(fe_rhs(3, &QuadSurd::one()).is_err());
        assert!(fe_rhs(2, &QuadSurd::rational(rat(-1, 2))).is_err());
    }

    #[test]
    fn known_values_from_fixed_points() {
        let rel =
            push_relation(2, &GenWord::new([(Gen::A, 1), (Gen::B, 1), (Gen::A, 1)]), &QuadSurd::sqrt_int(6)).unwrap();
        assert_eq!(solve_fixed(&rel).unwrap(), rat(2, 3));
        assert_eq!(psi_exact_sqrt(2, 2).unwrap(), QuadSurd::rational(rat(-1, 3)));
        assert_eq!(psi_exact_sqrt(4, 6).unwrap(), QuadSurd::rational(rat(127, 1980)));
        assert_eq!(psi_exact_at(2, &QuadSurd::sqrt_int(24)).unwrap(), QuadSurd::rational(rat(1, 6)));
        let deg = push_relation(2, &GenWord::new([(Gen::A, 3)]), &QuadSurd::sqrt_int(2)).unwrap();
        assert!(deg.alpha == QuadSurd::one() && deg.rho.is_zero());
        assert!(matches!(solve_fixed(&deg), Err(ModularError::Degenerate)));
        let moved = push_relation(2, &GenWord::new([(Gen::B, 1)]), &QuadSurd::sqrt_int(2)).unwrap();
        assert!(matches!(solve_fixed(&moved), Err(ModularError::NotFixed { .. })));
    }

    #[test]
    fn pole_names_prefix() {
        // B^1 applied to -1/2 hits 2z + 1 = 0 immediately
        let z = QuadSurd::rational(rat(-1, 2));
        let err = push_relation(2, &GenWord::new([(Gen::A, 1), (Gen::B, 1)]), &z).unwrap_err();
        assert!(err.to_string().contains("B^1"), "{err}");
    }

    #[test]
    fn rewrite_examples() {
        let r2 = QuadSurd::sqrt_int(2);
        let e = rewrite_rules(&PsiExpr::single(2, -r2.clone()));
        assert_eq!(e, PsiExpr::single(2, r2.clone()));
        let e = rewrite_rules(&PsiExpr::single(4, r2.add_rational(&rat(4, 1))));
        assert_eq!(e, PsiExpr::single(4, r2.clone()));
        // √48 = 2·√12 splits into ψ(√12) and ψ(√12 + 1), and √12 = 2√3 again
        let e = rewrite_rules(&PsiExpr::single(2, QuadSurd::sqrt_int(48)));
        assert!(e
            .terms
            .keys()
            .all(|k| k.0.cmp_rational(&rat(0, 1)) != Ordering::Less && k.0.cmp_rational(&rat(2, 1)) == Ordering::Less));
        let value = e.evaluate(|arg| psi_exact_at(2, arg).map(|c| c.to_rational().unwrap())).unwrap();
        let direct = psi_exact_at(2, &QuadSurd::sqrt_int(48)).unwrap().to_rational().unwrap();
        assert_eq!(value, direct);
    }
}
