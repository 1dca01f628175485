use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::squarefree_split;
use super::{rat_int, ExactError, Rational};

/// An element a + b√d of the real quadratic field ℚ(√d).
///
/// Canonical form: `d` is squarefree and at least 2 whenever `b != 0`;
/// purely rational elements carry `b = 0` and `d = 1`, and combine freely
/// with elements of any field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadSurd {
    /// a + b√d, pulling square factors out of `d`.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if d == 0 || b.is_zero() {
            return Self::rational(a);
        }
        let (s, core) = squarefree_split(d);
        let b = b * rat_int(s);
        if core == 1 {
            Self::rational(a + b)
        } else {
            Self { a, b, d: core }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// √n for a positive integer n.
    pub fn sqrt_int(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    /// √r for a non-negative rational r, written as √(pq)/q.
    pub fn sqrt_rational(r: &Rational) -> Result<Self, ExactError> {
        if r.is_negative() {
            return Err(ExactError::NegativeRadicand(r.to_string()));
        }
        let prod = r.numer() * r.denom();
        let n = prod.to_u64().ok_or_else(|| ExactError::RadicandOverflow(prod.to_string()))?;
        Ok(Self::new(Rational::zero(), Rational::new(BigInt::one(), r.denom().clone()), n))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Squarefree radicand, or 1 for rational elements.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// x · conj(x) = a² - b²d.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.d)
    }

    pub fn trace(&self) -> Rational {
        &self.a * rat_int(2)
    }

    fn common_radicand(&self, other: &Self) -> Result<u64, ExactError> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(ExactError::RadicandMismatch(self.d, other.d)),
        }
    }

    fn build(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Self { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * rat_int(d);
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, d))
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::build(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::build(&self.a * r, &self.b * r, self.d)
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        Self::build(&self.a + r, self.b.clone(), self.d)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact sign of the real number a + b√d.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * rat_int(self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact comparison of the real values.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering, ExactError> {
        Ok(self.checked_sub(other)?.signum())
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.add_rational(&-r).signum()
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // value = (A + B√d) / L with L > 0
        let l = self.a.denom().lcm(self.b.denom());
        let big_a = (&self.a * Rational::from_integer(l.clone())).to_integer();
        let big_b = (&self.b * Rational::from_integer(l.clone())).to_integer();
        let s = (&big_b * &big_b * BigInt::from(self.d)).sqrt();
        // B√d lies strictly inside (lo, lo + 1)
        let lo = if big_b.sign() == Sign::Minus { big_a - s - 1 } else { big_a + s };
        lo.div_floor(&l)
    }

    /// Nearest integer, ties toward the smaller one.
    pub fn round_half_down(&self) -> BigInt {
        let shifted = self.add_rational(&Rational::new(BigInt::from(-1), BigInt::from(2)));
        // ceil(x - 1/2)
        let f = shifted.floor();
        if shifted.is_rational() && Rational::from_integer(f.clone()) == shifted.a {
            f
        } else {
            f + 1
        }
    }

    /// Fractional part as an exact element: x - floor(x).
    pub fn fract(&self) -> Self {
        self.add_rational(&-Rational::from_integer(self.floor()))
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Primitive integer polynomial (a, b, c), a > 0, with a x² + b x + c
    /// vanishing at this element. Rational elements have no quadratic one.
    pub fn minimal_polynomial(&self) -> Option<(BigInt, BigInt, BigInt)> {
        if self.is_rational() {
            return None;
        }
        let lin = -self.trace();
        let cst = self.norm();
        let l = lin.denom().lcm(cst.denom());
        let lr = Rational::from_integer(l.clone());
        let b = (lin * &lr).to_integer();
        let c = (cst * &lr).to_integer();
        let g = l.gcd(&b).gcd(&c);
        Some((l / &g, b / &g, c / &g))
    }

    /// b² - 4ac of the minimal polynomial.
    pub fn discriminant(&self) -> Option<BigInt> {
        self.minimal_polynomial().map(|(a, b, c)| &b * &b - BigInt::from(4) * a * c)
    }
}

impl From<Rational> for QuadSurd {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl From<i64> for QuadSurd {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

// Operator impls panic on mixed radicands; use the checked_* forms where
// the fields are not known to agree.
impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        self.checked_add(rhs).expect("QuadSurd addition")
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        self.checked_sub(rhs).expect("QuadSurd subtraction")
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &QuadSurd) -> QuadSurd {
        self.checked_mul(rhs).expect("QuadSurd multiplication")
    }
}

impl Div for &QuadSurd {
    type Output = QuadSurd;
    fn div(self, rhs: &QuadSurd) -> QuadSurd {
        self.checked_div(rhs).expect("QuadSurd division")
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::build(-self.a.clone(), -self.b.clone(), self.d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, rhs: QuadSurd) -> QuadSurd { (&self).$m(&rhs) }
        }
        impl $tr<&QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, rhs: &QuadSurd) -> QuadSurd { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("√{}", self.d);
        let mag = self.b.abs();
        let surd = if mag.is_one() { root } else { format!("{mag}·{root}") };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else {
            let op = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {op} {surd}", self.a)
        }
    }
}
