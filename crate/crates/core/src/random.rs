//! Seeded random fixtures for property suites.
//!
//! Exact mode draws small rationals `p/q` (`|p| <= 9`, `1 <= q <= 4`);
//! floating mode draws uniformly from `[-1, 1]`.

use rand::Rng;

use crate::qmatrix::{QMatF, QMatrix, QVector};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;
use crate::spectral::exp_skew;

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, bound: f64) -> f64 {
    rng.gen_range(-bound..=bound)
}

pub fn scalar<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    if S::EXACT {
        S::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
    } else {
        S::from_f64(uniform(rng, 1.0)).expect("finite")
    }
}

/// Integer-valued scalar in `[-bound, bound]`.
pub fn small_int<S: Scalar, R: Rng + ?Sized>(rng: &mut R, bound: i64) -> S {
    S::from_i64(rng.gen_range(-bound..=bound))
}

pub fn quaternion<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Quaternion<S> {
    Quaternion::new(scalar(rng), scalar(rng), scalar(rng), scalar(rng))
}

pub fn complex<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Quaternion<S> {
    Quaternion::new(scalar(rng), scalar(rng), S::zero(), S::zero())
}

fn imaginary<S: Scalar, R: Rng + ?Sized>(rng: &mut R, complex_only: bool) -> Quaternion<S> {
    if complex_only {
        Quaternion::new(S::zero(), scalar(rng), S::zero(), S::zero())
    } else {
        Quaternion::new(S::zero(), scalar(rng), scalar(rng), scalar(rng))
    }
}

pub fn matrix<S: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> QMatrix<S> {
    QMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| quaternion(rng)).collect())
}

pub fn vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> QVector<S> {
    QVector::new((0..n).map(|_| quaternion(rng)).collect())
}

/// Vector with integer components in `[-bound, bound]`.
pub fn small_int_vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> QVector<S> {
    QVector::new(
        (0..n)
            .map(|_| {
                Quaternion::new(
                    small_int(rng, bound),
                    small_int(rng, bound),
                    small_int(rng, bound),
                    small_int(rng, bound),
                )
            })
            .collect(),
    )
}

fn self_adjoint_like<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, skew: bool, complex_only: bool) -> QMatrix<S> {
    let mut m = QMatrix::zeros(n, n);
    for p in 0..n {
        let d = if skew { imaginary(rng, complex_only) } else { Quaternion::real(scalar(rng)) };
        m.set(p, p, d);
        for q in p + 1..n {
            let z: Quaternion<S> = if complex_only { complex(rng) } else { quaternion(rng) };
            let mirrored = if skew { -z.conj() } else { z.conj() };
            m.set(p, q, z);
            m.set(q, p, mirrored);
        }
    }
    m
}

pub fn hermitian<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix<S> {
    self_adjoint_like(rng, n, false, false)
}

pub fn skew<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix<S> {
    self_adjoint_like(rng, n, true, false)
}

pub fn complex_hermitian<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix<S> {
    self_adjoint_like(rng, n, false, true)
}

pub fn complex_skew<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix<S> {
    self_adjoint_like(rng, n, true, true)
}

/// Haar-like quaternionic unitary `e^{A}` for a random skew `A` with entries of order 3.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatF {
    let a: QMatF = skew(rng, n);
    exp_skew(&a.scale_real(&3.0), 1.0).expect("exponential of a skew matrix")
}

/// Complex unitary `e^{A}` for a random complex skew `A`.
pub fn complex_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatF {
    let a: QMatF = complex_skew(rng, n);
    exp_skew(&a.scale_real(&3.0), 1.0).expect("exponential of a skew matrix")
}
