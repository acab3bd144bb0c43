//! Exact value arithmetic.
//!
//! Every valuation is a non-negative integer numerator over an instance-wide
//! scale, so comparisons between bundle values never need the scale at all.
//! Thresholds such as `(2/3 - eps) * mu` are carried as [`Ratio`]s and compared
//! by cross-multiplication; no floating point is involved in any decision.

use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Sub};

use crate::error::Error;

/// A non-negative scaled value (numerator over the instance scale).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(pub u64);

impl Value {
    pub const ZERO: Value = Value(0);

    #[inline]
    pub const fn new(numerator: u64) -> Self {
        Value(numerator)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, rhs: Value) -> Option<Value> {
        self.0.checked_add(rhs.0).map(Value)
    }

    pub fn checked_mul(self, factor: u64) -> Option<Value> {
        self.0.checked_mul(factor).map(Value)
    }

    /// `self >= threshold`, exactly.
    #[inline]
    pub fn meets(self, threshold: Ratio) -> bool {
        Ratio::from(self) >= threshold
    }

    pub fn as_ratio(self) -> Ratio {
        Ratio::from(self)
    }
}

// Overflow is a hard error: sums of u64 numerators never wrap silently.
impl Add for Value {
    type Output = Value;

    #[inline]
    fn add(self, rhs: Value) -> Value {
        self.checked_add(rhs).expect("value overflow")
    }
}

impl AddAssign for Value {
    #[inline]
    fn add_assign(&mut self, rhs: Value) {
        *self = *self + rhs;
    }
}

impl Sub for Value {
    type Output = Value;

    #[inline]
    fn sub(self, rhs: Value) -> Value {
        Value(self.0.checked_sub(rhs.0).expect("value underflow"))
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        iter.copied().sum()
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Non-negative exact rational `num / den`, always kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u128, den: u128) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::input("ratio denominator must be positive"));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: u128, den: u128) -> Self {
        if num == 0 {
            return Ratio::ZERO;
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub const fn integer(v: u128) -> Self {
        Ratio { num: v, den: 1 }
    }

    #[inline]
    pub fn numer(&self) -> u128 {
        self.num
    }

    #[inline]
    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Product, reducing crosswise first so intermediate terms stay small.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Ratio) -> Ratio {
        if self.num == 0 || rhs.num == 0 {
            return Ratio::ZERO;
        }
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .expect("ratio overflow");
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .expect("ratio overflow");
        Ratio::reduced(num, den)
    }

    pub fn mul_int(self, k: u128) -> Ratio {
        self.mul(Ratio::integer(k))
    }

    pub fn div_int(self, k: u128) -> Result<Ratio, Error> {
        if k == 0 {
            return Err(Error::input("division by zero"));
        }
        Ok(self.mul(Ratio { num: 1, den: k }))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Ratio) -> Ratio {
        let g = gcd(self.den, rhs.den);
        let l = self.den / g;
        let den = l.checked_mul(rhs.den).expect("ratio overflow");
        let a = self.num.checked_mul(rhs.den / g).expect("ratio overflow");
        let b = rhs.num.checked_mul(l).expect("ratio overflow");
        Ratio::reduced(a.checked_add(b).expect("ratio overflow"), den)
    }

    /// `self - rhs`, or `None` if the result would be negative.
    pub fn checked_sub(self, rhs: Ratio) -> Option<Ratio> {
        if self < rhs {
            return None;
        }
        let g = gcd(self.den, rhs.den);
        let l = self.den / g;
        let den = l.checked_mul(rhs.den).expect("ratio overflow");
        let a = self.num.checked_mul(rhs.den / g).expect("ratio overflow");
        let b = rhs.num.checked_mul(l).expect("ratio overflow");
        Some(Ratio::reduced(a - b, den))
    }

    /// `1 - self` for a ratio in `[0, 1]`.
    pub fn complement(self) -> Option<Ratio> {
        Ratio::ONE.checked_sub(self)
    }

    pub fn floor(&self) -> u128 {
        self.num / self.den
    }

    pub fn ceil(&self) -> u128 {
        self.num.div_ceil(self.den)
    }

    /// Smallest integer value `v` with `v >= self`.
    pub fn ceil_value(&self) -> Value {
        Value(u64::try_from(self.ceil()).expect("threshold exceeds u64"))
    }

    /// Lossy conversion for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl From<Value> for Ratio {
    fn from(v: Value) -> Self {
        Ratio::integer(v.0 as u128)
    }
}

/// Full 256-bit product of two u128s as (hi, lo).
fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let lo = (ll & MASK) | (mid << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        wide_mul(self.num, other.den).cmp(&wide_mul(other.num, self.den))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An approximation parameter `0 < eps < 1`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon(Ratio);

impl Epsilon {
    pub fn new(p: u64, q: u64) -> Result<Self, Error> {
        let r = Ratio::new(p as u128, q as u128)?;
        Self::from_ratio(r)
    }

    pub fn from_ratio(r: Ratio) -> Result<Self, Error> {
        if r.is_zero() || r >= Ratio::ONE {
            return Err(Error::input("epsilon must lie strictly between 0 and 1"));
        }
        Ok(Epsilon(r))
    }

    pub fn ratio(&self) -> Ratio {
        self.0
    }

    /// `1 - eps`.
    pub fn keep(&self) -> Ratio {
        self.0.complement().expect("eps < 1")
    }

    /// `eps * factor`, which must remain inside `(0, 1)`.
    pub fn scaled(&self, factor: Ratio) -> Result<Epsilon, Error> {
        Epsilon::from_ratio(self.0.mul(factor))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl core::str::FromStr for Epsilon {
    type Err = Error;

    /// Parses `P/Q` (or a bare integer numerator over 1, which is always rejected).
    fn from_str(s: &str) -> Result<Self, Error> {
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p
            .parse()
            .map_err(|_| Error::input("epsilon must be written as P/Q"))?;
        let q: u64 = q
            .parse()
            .map_err(|_| Error::input("epsilon must be written as P/Q"))?;
        Epsilon::new(p, q)
    }
}
