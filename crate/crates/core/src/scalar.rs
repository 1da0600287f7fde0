//! Scalar fields.
//!
//! Every algebraic identity in this crate is checked over exact rationals.
//! `f64` is used for sampling and for the multistart solvers, and [`QSqrt3`]
//! (numbers `a + b·√3` with rational `a`, `b`) keeps the cyclic-algebra
//! geometry exact, since the basis vector `v₃ = (e₂ − e₃)/√3` and the map
//! `Π → ℂ` are irrational over ℚ.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Absolute slack used when a float is compared against zero.
pub const FLOAT_ZERO_TOLERANCE: f64 = 1e-12;

/// A field the algebra, polynomial and linear-algebra code can run over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when equality is exact (no rounding).
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn to_f64(&self) -> f64;

    /// Exact scalars: `== 0`. Floats: `|x| <= FLOAT_ZERO_TOLERANCE`.
    fn is_negligible(&self) -> bool;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// Fields that contain `√3`.
pub trait Sqrt3Field: Scalar {
    fn sqrt3() -> Self;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        f64::abs(*self) <= FLOAT_ZERO_TOLERANCE
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

impl Sqrt3Field for f64 {
    fn sqrt3() -> Self {
        3f64.sqrt()
    }
}

/// Largest absolute value in a sequence (zero when empty).
pub fn max_abs<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| {
        let a = v.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact binary value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"n"`, `"n/d"`, or a decimal such as `"-1.25"` / `"3e-2"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Formats as `"n"` or `"n/d"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational that serializes as a `"num/den"` string.
///
/// Deserialization also accepts decimal strings and JSON numbers (taken at
/// their exact binary value).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let value = serde_json::Value::deserialize(deserializer)?;
        match value {
            serde_json::Value::String(s) => parse_rational(&s)
                .map(RationalText)
                .map_err(D::Error::custom),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(RationalText(rat(i)))
                } else {
                    n.as_f64()
                        .and_then(rational_from_f64)
                        .map(RationalText)
                        .ok_or_else(|| D::Error::custom(format!("non-finite number {n}")))
                }
            }
            other => Err(D::Error::custom(format!(
                "expected a rational string or number, got {other}"
            ))),
        }
    }
}

/// Exact element `a + b·√3` of the quadratic field ℚ(√3).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt3 {
            a,
            b: Rational::zero(),
        }
    }

    pub fn conjugate(&self) -> Self {
        QSqrt3 {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 3b²`; zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(3) * &self.b * &self.b
    }

    /// The rational part when `b == 0`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: the larger of a² and 3b² wins
                let lhs = &self.a * &self.a;
                let rhs = rat(3) * &self.b * &self.b;
                if lhs > rhs {
                    sa
                } else {
                    sb
                }
            }
        }
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.a)),
            (true, false) => write!(f, "{}*sqrt3", format_rational(&self.b)),
            (false, false) => write!(
                f,
                "{}{}{}*sqrt3",
                format_rational(&self.a),
                if self.b.is_negative() { "" } else { "+" },
                format_rational(&self.b)
            ),
        }
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.a, -self.b)
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: QSqrt3) -> QSqrt3 {
        let a = &self.a * &rhs.a + rat(3) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QSqrt3::new(a, b)
    }
}

impl Div for QSqrt3 {
    type Output = QSqrt3;
    fn div(self, rhs: QSqrt3) -> QSqrt3 {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt3)");
        let num = self * rhs.conjugate();
        QSqrt3::new(num.a / &n, num.b / n)
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        QSqrt3::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        QSqrt3::rational(Rational::one())
    }
}

impl Scalar for QSqrt3 {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        QSqrt3::rational(r.clone())
    }

    fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.a) + Scalar::to_f64(&self.b) * 3f64.sqrt()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Sqrt3Field for QSqrt3 {
    fn sqrt3() -> Self {
        QSqrt3::new(Rational::zero(), Rational::one())
    }
}
