use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

const MAG_BITS: u32 = 30;
const INF_EXP: i64 = 1 << 60;

/// Non-negative magnitude man·2^exp with a 30-bit mantissa.
///
/// Every constructor and operation rounds in a fixed direction: the
/// `*_up` family never underestimates, `*_down` never overestimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bit_len(x: u128) -> u32 {
    128 - x.leading_zeros()
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };
    /// Absorbing upper bound for results that carry no information.
    pub const INF: Mag = Mag { man: 1, exp: INF_EXP };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn is_inf(&self) -> bool {
        self.exp >= INF_EXP
    }

    fn normalize_up(man: u128, exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        if exp >= INF_EXP - 200 {
            return Mag::INF;
        }
        let len = bit_len(man);
        if len <= MAG_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = len - MAG_BITS;
        let mut m = man >> shift;
        if m << shift != man {
            m += 1;
        }
        let mut e = exp + shift as i64;
        if bit_len(m) > MAG_BITS {
            m >>= 1;
            e += 1;
        }
        Mag { man: m as u64, exp: e }
    }

    fn normalize_down(man: u128, exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let len = bit_len(man);
        if len <= MAG_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = len - MAG_BITS;
        Mag { man: (man >> shift) as u64, exp: exp + shift as i64 }
    }

    /// 2^e exactly.
    pub fn pow2(e: i64) -> Mag {
        if e >= INF_EXP {
            return Mag::INF;
        }
        Mag { man: 1, exp: e }
    }

    pub fn from_u64_up(n: u64) -> Mag {
        Self::normalize_up(n as u128, 0)
    }

    /// Upper bound for |n|·2^exp.
    pub fn from_bigint_up(n: &BigInt, exp: i64) -> Mag {
        let bits = n.bits();
        if bits == 0 {
            return Mag::ZERO;
        }
        let mag = n.magnitude();
        if bits <= 64 {
            return Self::normalize_up(u64_of(mag) as u128, exp);
        }
        let shift = bits - 64;
        let top = u64_of(&(mag >> shift)) as u128 + 1;
        Self::normalize_up(top, exp + shift as i64)
    }

    /// Lower bound for |n|·2^exp.
    pub fn from_bigint_down(n: &BigInt, exp: i64) -> Mag {
        let bits = n.bits();
        if bits == 0 {
            return Mag::ZERO;
        }
        let mag = n.magnitude();
        if bits <= 64 {
            return Self::normalize_down(u64_of(mag) as u128, exp);
        }
        let shift = bits - 64;
        Self::normalize_down(u64_of(&(mag >> shift)) as u128, exp + shift as i64)
    }

    /// Upper bound for a finite non-negative f64.
    pub fn from_f64_up(x: f64) -> Mag {
        assert!(x >= 0.0 && x.is_finite(), "magnitude must be finite and non-negative");
        if x == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = frexp(x);
        // x = m·2^e with m in [0.5, 1); take 53 mantissa bits exactly
        let man = (m * (1u64 << 53) as f64) as u128;
        Self::normalize_up(man, e as i64 - 53)
    }

    /// Position of the leading bit: 2^(top-1) <= value < 2^top.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + bit_len(self.man as u128) as i64
        }
    }

    pub fn add_up(self, other: Mag) -> Mag {
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if hi.exp - lo.exp > 90 {
            // lo is below one unit of hi's last place
            return Self::normalize_up(((hi.man as u128) << 64) + 1, hi.exp - 64);
        }
        if hi.exp >= lo.exp {
            let shifted = (hi.man as u128) << (hi.exp - lo.exp);
            Self::normalize_up(shifted + lo.man as u128, lo.exp)
        } else {
            let shifted = (lo.man as u128) << (lo.exp - hi.exp);
            Self::normalize_up(shifted + hi.man as u128, hi.exp)
        }
    }

    /// Lower bound for self - other, clamped at zero.
    pub fn sub_down(self, other: Mag) -> Mag {
        if other.is_zero() {
            return self;
        }
        if other.is_inf() {
            return Mag::ZERO;
        }
        if self.is_inf() {
            return Mag::INF;
        }
        if self <= other {
            return Mag::ZERO;
        }
        if self.exp - other.exp > 90 {
            return Self::normalize_down(((self.man as u128) << 64) - 1, self.exp - 64);
        }
        let e = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - e);
        let b = (other.man as u128) << (other.exp - e);
        Self::normalize_down(a - b, e)
    }

    pub fn mul_up(self, other: Mag) -> Mag {
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Self::normalize_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    pub fn mul_down(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        Self::normalize_down(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Upper bound for self / other; other must be non-zero.
    pub fn div_up(self, other: Mag) -> Mag {
        if other.is_zero() || self.is_inf() {
            return Mag::INF;
        }
        if self.is_zero() || other.is_inf() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num / other.man as u128 + 1;
        Self::normalize_up(q, self.exp - other.exp - 64)
    }

    pub fn div_down(self, other: Mag) -> Mag {
        assert!(!other.is_zero(), "division by zero magnitude");
        if self.is_zero() || other.is_inf() {
            return Mag::ZERO;
        }
        if self.is_inf() {
            return Mag::INF;
        }
        let num = (self.man as u128) << 64;
        Self::normalize_down(num / other.man as u128, self.exp - other.exp - 64)
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() || self.is_inf() {
            self
        } else {
            Mag { man: self.man, exp: self.exp + e }
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Mantissa and binary exponent, for conversions.
    pub fn parts(&self) -> (u64, i64) {
        (self.man, self.exp)
    }

    /// log2 of the value (approximate), -inf for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            (self.man as f64).log2() + self.exp as f64
        }
    }

    /// Nearest f64, saturating to 0 or infinity outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.is_inf() {
            return f64::INFINITY;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        (self.man as f64) * 2f64.powi(e)
    }

    /// Decimal rendering like `3.1e-52`, rounded upward.
    pub fn to_sci_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.is_inf() {
            return "inf".to_string();
        }
        let l10 = self.log2() * std::f64::consts::LOG10_2;
        let mut e10 = l10.floor();
        let mut mant = 10f64.powf(l10 - e10);
        mant = (mant * 10.0).ceil() / 10.0;
        if mant >= 10.0 {
            mant /= 10.0;
            e10 += 1.0;
        }
        format!("{mant:.1}e{}", e10 as i64)
    }
}

fn u64_of(n: &num_bigint::BigUint) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0)
}

fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            o => return o,
        }
        let e = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - e);
        let b = (other.man as u128) << (other.exp - e);
        a.cmp(&b)
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string())
    }
}
