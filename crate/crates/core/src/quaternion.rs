//! Quaternion scalars `a1 + a2 i + a3 j + a4 k` over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// `re + i·i + j·j + k·k`, with `i² = j² = k² = ijk = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<S> {
    pub re: S,
    pub i: S,
    pub j: S,
    pub k: S,
}

pub type QuatF = Quaternion<f64>;
pub type QuatQ = Quaternion<Rational>;

impl<S: Scalar> Quaternion<S> {
    pub fn new(re: S, i: S, j: S, k: S) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn from_array([re, i, j, k]: [S; 4]) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn to_array(&self) -> [S; 4] {
        [self.re.clone(), self.i.clone(), self.j.clone(), self.k.clone()]
    }

    /// Build from small integer components; convenient in tests and fixtures.
    pub fn from_ints(re: i64, i: i64, j: i64, k: i64) -> Self {
        Quaternion::new(S::from_i64(re), S::from_i64(i), S::from_i64(j), S::from_i64(k))
    }

    pub fn zero() -> Self {
        Self::real(S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn real(re: S) -> Self {
        Quaternion::new(re, S::zero(), S::zero(), S::zero())
    }

    pub fn unit_i() -> Self {
        Quaternion::new(S::zero(), S::one(), S::zero(), S::zero())
    }

    pub fn unit_j() -> Self {
        Quaternion::new(S::zero(), S::zero(), S::one(), S::zero())
    }

    pub fn unit_k() -> Self {
        Quaternion::new(S::zero(), S::zero(), S::zero(), S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    /// Every component within `tol` of zero (exact test in exact mode).
    pub fn within(&self, tol: f64) -> bool {
        self.re.within(tol) && self.i.within(tol) && self.j.within(tol) && self.k.within(tol)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.re.clone(), -self.i.clone(), -self.j.clone(), -self.k.clone())
    }

    pub fn modulus_sq(&self) -> S {
        self.re.clone() * self.re.clone()
            + self.i.clone() * self.i.clone()
            + self.j.clone() * self.j.clone()
            + self.k.clone() * self.k.clone()
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = self.modulus_sq().checked_recip().ok_or(Error::DivisionByZero)?;
        Ok(self.conj().scale(&m))
    }

    /// Multiply every component by a real scalar.
    pub fn scale(&self, r: &S) -> Self {
        Quaternion::new(
            self.re.clone() * r.clone(),
            self.i.clone() * r.clone(),
            self.j.clone() * r.clone(),
            self.k.clone() * r.clone(),
        )
    }

    /// `true` when the `j` and `k` parts vanish (within `tol`).
    pub fn is_complex(&self, tol: f64) -> bool {
        self.j.within(tol) && self.k.within(tol)
    }

    /// Real part of `p* q`, the Euclidean dot product of the components.
    pub fn dot(&self, other: &Self) -> S {
        self.re.clone() * other.re.clone()
            + self.i.clone() * other.i.clone()
            + self.j.clone() * other.j.clone()
            + self.k.clone() * other.k.clone()
    }

    /// Unique split `q = a + b j` with complex `a`, `b`.
    pub fn to_complex_pair(&self) -> (Complex<S>, Complex<S>) {
        (Complex::new(self.re.clone(), self.i.clone()), Complex::new(self.j.clone(), self.k.clone()))
    }

    pub fn from_complex_pair(a: Complex<S>, b: Complex<S>) -> Self {
        Quaternion::new(a.re, a.im, b.re, b.im)
    }

    pub fn from_complex(a: Complex<S>) -> Self {
        Quaternion::new(a.re, a.im, S::zero(), S::zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Quaternion<T> {
        Quaternion::new(f(&self.re), f(&self.i), f(&self.j), f(&self.k))
    }

    pub fn to_f64(&self) -> QuatF {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> S {
        let mut best = self.re.abs();
        for c in [&self.i, &self.j, &self.k] {
            let a = c.abs();
            if a > best {
                best = a;
            }
        }
        best
    }
}

impl QuatF {
    pub fn modulus(&self) -> f64 {
        self.modulus_sq().sqrt()
    }
}

impl<S: Scalar> Add for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn add(self, rhs: Self) -> Quaternion<S> {
        Quaternion::new(
            self.re.clone() + rhs.re.clone(),
            self.i.clone() + rhs.i.clone(),
            self.j.clone() + rhs.j.clone(),
            self.k.clone() + rhs.k.clone(),
        )
    }
}

impl<S: Scalar> Sub for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn sub(self, rhs: Self) -> Quaternion<S> {
        Quaternion::new(
            self.re.clone() - rhs.re.clone(),
            self.i.clone() - rhs.i.clone(),
            self.j.clone() - rhs.j.clone(),
            self.k.clone() - rhs.k.clone(),
        )
    }
}

impl<S: Scalar> Mul for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn mul(self, q: Self) -> Quaternion<S> {
        let p = self;
        let (a1, b1, c1, d1) = (&p.re, &p.i, &p.j, &p.k);
        let (a2, b2, c2, d2) = (&q.re, &q.i, &q.j, &q.k);
        let m = |x: &S, y: &S| x.clone() * y.clone();
        Quaternion::new(
            m(a1, a2) - m(b1, b2) - m(c1, c2) - m(d1, d2),
            m(a1, b2) + m(b1, a2) + m(c1, d2) - m(d1, c2),
            m(a1, c2) - m(b1, d2) + m(c1, a2) + m(d1, b2),
            m(a1, d2) + m(b1, c2) - m(c1, b2) + m(d1, a2),
        )
    }
}

impl<S: Scalar> Neg for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        Quaternion::new(-self.re.clone(), -self.i.clone(), -self.j.clone(), -self.k.clone())
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $method:ident) => {
        impl<S: Scalar> $tr for Quaternion<S> {
            type Output = Quaternion<S>;
            fn $method(self, rhs: Self) -> Quaternion<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        -&self
    }
}

impl<S: Scalar> AddAssign<&Quaternion<S>> for Quaternion<S> {
    fn add_assign(&mut self, rhs: &Quaternion<S>) {
        *self = &*self + rhs;
    }
}

impl<S: Scalar> fmt::Display for Quaternion<S> {
    /// `a1 + a2 i + a3 j + a4 k`; exact rationals print as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(&self.re, ""), (&self.i, " i"), (&self.j, " j"), (&self.k, " k")];
        for (idx, (c, unit)) in parts.into_iter().enumerate() {
            let neg = *c < S::zero();
            let text = if neg { (-c.clone()).to_string() } else { c.to_string() };
            match (idx, neg) {
                (0, false) => write!(f, "{text}{unit}")?,
                (0, true) => write!(f, "-{text}{unit}")?,
                (_, false) => write!(f, " + {text}{unit}")?,
                (_, true) => write!(f, " - {text}{unit}")?,
            }
        }
        Ok(())
    }
}
