//! Coefficient fields for quaternion components.
//!
//! Two implementations exist: [`Rational`] (arbitrary precision, no rounding)
//! and `f64`. Everything that only needs field operations is generic over
//! [`Scalar`]; eigensolvers and exponentials are `f64`-only, exact nullspace
//! computations are [`Rational`]-only.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in reduced form with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Default comparison tolerance for floating computations.
pub const FLOAT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for exact arithmetic. Tolerances are ignored in that mode.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Nearest representable value (exact binary expansion for rationals).
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Zero test: exact equality in exact mode, `|x| <= tol` otherwise.
    fn within(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    fn checked_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Tolerance used when callers do not supply one.
    fn default_tol() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            FLOAT_TOL
        }
    }

    /// Components `[c0, c1, c2, c3]` of a quaternion `c` with
    /// `|c|^2 = 1 / norm_sq`, used to rescale a vector to unit norm from the
    /// right. Floating mode returns the real scalar `1/sqrt(norm_sq)`; exact
    /// mode decomposes into four rational squares.
    fn unit_scale(norm_sq: &Self) -> Result<[Self; 4]>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn unit_scale(norm_sq: &Self) -> Result<[Self; 4]> {
        if *norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::DivisionByZero);
        }
        Ok([1.0 / norm_sq.sqrt(), 0.0, 0.0, 0.0])
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn unit_scale(norm_sq: &Self) -> Result<[Self; 4]> {
        if !norm_sq.is_positive() {
            return Err(Error::DivisionByZero);
        }
        // 1/r = q/p = (q p) / p^2, and q p is a sum of four integer squares.
        let p = norm_sq.numer();
        let q = norm_sq.denom();
        let target = (q * p)
            .to_u128()
            .ok_or_else(|| Error::Precondition("squared norm too large for exact normalization".into()))?;
        let squares = four_squares(target);
        let den = p.clone();
        Ok(squares.map(|s| Rational::new(BigInt::from(s), den.clone())))
    }
}

/// Parse `"p/q"`, `"p"` or a decimal literal into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.sign() == Sign::NoSign {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = text.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    // decimal such as "0.25" or "-1.5e-3"
    let v: f64 = text.parse().map_err(|_| bad())?;
    decimal_to_rational(text).or_else(|| Rational::from_float(v)).ok_or_else(bad)
}

fn decimal_to_rational(text: &str) -> Option<Rational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Canonical text for a rational: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn two_squares(n: u128) -> Option<(u128, u128)> {
    let mut c = isqrt(n);
    loop {
        let rest = n - c * c;
        let d = isqrt(rest);
        if d * d == rest {
            return Some((c, d));
        }
        if c == 0 || c * c < rest {
            return None;
        }
        c -= 1;
    }
}

/// Lagrange decomposition `n = a^2 + b^2 + c^2 + d^2` by descending search.
pub(crate) fn four_squares(n: u128) -> [u128; 4] {
    if n == 0 {
        return [0; 4];
    }
    // Strip factors of 4; (2a)^2 + ... scales back up.
    let mut scale = 1u128;
    let mut m = n;
    while m.is_multiple_of(4) {
        m /= 4;
        scale *= 2;
    }
    let mut a = isqrt(m);
    loop {
        let rest_a = m - a * a;
        let mut b = isqrt(rest_a);
        loop {
            let rest_b = rest_a - b * b;
            if let Some((c, d)) = two_squares(rest_b) {
                return [a * scale, b * scale, c * scale, d * scale];
            }
            if b == 0 || b * b < rest_b {
                break;
            }
            b -= 1;
        }
        if a == 0 {
            unreachable!("every non-negative integer is a sum of four squares");
        }
        a -= 1;
    }
}
