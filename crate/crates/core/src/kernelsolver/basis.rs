//! Canonical real bases of the self-adjoint and skew-adjoint matrices.
//!
//! Order: diagonal elements first (by index, then by unit), then off-diagonal
//! elements by `(p, q)` lexicographic and unit in `(1, i, j, k)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// Coefficient ring of the matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Complex,
    Quaternionic,
}

impl Ring {
    /// Units `1, i[, j, k]` spanning the ring over ℝ.
    pub fn units<S: Scalar>(self) -> Vec<Quaternion<S>> {
        let mut units = vec![Quaternion::one(), Quaternion::unit_i()];
        if self == Ring::Quaternionic {
            units.push(Quaternion::unit_j());
            units.push(Quaternion::unit_k());
        }
        units
    }

    pub fn imaginary_units<S: Scalar>(self) -> Vec<Quaternion<S>> {
        self.units().into_iter().skip(1).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Ring::Complex => "complex",
            Ring::Quaternionic => "quat",
        }
    }

    pub fn parse(text: &str) -> Result<Ring> {
        match text {
            "complex" | "c" | "C" => Ok(Ring::Complex),
            "quat" | "quaternionic" | "h" | "H" => Ok(Ring::Quaternionic),
            other => Err(Error::Parse(format!("unknown ring {other:?} (expected quat or complex)"))),
        }
    }

    /// `true` if every entry of `m` lies in the ring.
    pub fn contains<S: Scalar>(self, m: &QMatrix<S>, tol: f64) -> bool {
        self == Ring::Quaternionic || m.is_complex(tol)
    }

    pub fn dim_herm(self, n: usize) -> usize {
        match self {
            Ring::Complex => n * n,
            Ring::Quaternionic => n * (2 * n - 1),
        }
    }

    pub fn dim_aherm(self, n: usize) -> usize {
        match self {
            Ring::Complex => n * n,
            Ring::Quaternionic => n * (2 * n + 1),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// Self-adjoint matrices.
    Herm,
    /// Skew-adjoint matrices.
    AHerm,
}

/// Ordered real basis, orthogonal under `<X, Y>_F = Re tr(X† Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet<S> {
    pub ring: Ring,
    pub n: usize,
    pub space: Space,
    elements: Vec<QMatrix<S>>,
    norms_sq: Vec<S>,
    support: Vec<Vec<(usize, usize, Quaternion<S>)>>,
}

impl<S: Scalar> BasisSet<S> {
    fn build(ring: Ring, n: usize, space: Space) -> Self {
        let mut elements = Vec::new();
        let diag_units = match space {
            Space::Herm => vec![Quaternion::one()],
            Space::AHerm => ring.imaginary_units(),
        };
        for p in 0..n {
            for u in &diag_units {
                elements.push(QMatrix::unit(n, p, p, u));
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                for u in ring.units::<S>() {
                    let mirrored = match space {
                        Space::Herm => u.conj(),
                        Space::AHerm => -u.conj(),
                    };
                    let mut m = QMatrix::unit(n, p, q, &u);
                    m.set(q, p, mirrored);
                    elements.push(m);
                }
            }
        }
        let norms_sq = elements.iter().map(QMatrix::frobenius_norm_sq).collect();
        let support = elements
            .iter()
            .map(|m| {
                (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .filter(|&(r, c)| !m.get(r, c).is_zero())
                    .map(|(r, c)| (r, c, m.get(r, c).clone()))
                    .collect()
            })
            .collect();
        BasisSet { ring, n, space, elements, norms_sq, support }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[QMatrix<S>] {
        &self.elements
    }

    pub fn get(&self, idx: usize) -> &QMatrix<S> {
        &self.elements[idx]
    }

    /// `<t, t>_F` for every element; each is 1 or 2.
    pub fn norms_sq(&self) -> &[S] {
        &self.norms_sq
    }

    /// Pairwise orthogonality of all elements (exact in exact mode).
    pub fn certify_orthogonality(&self, tol: f64) -> bool {
        (0..self.len()).all(|a| {
            (a + 1..self.len())
                .all(|b| self.elements[a].frobenius_inner(&self.elements[b]).map(|v| v.within(tol)).unwrap_or(false))
        })
    }

    /// Real coordinates of `m`; fails if `m` is not in the span.
    pub fn coordinates(&self, m: &QMatrix<S>, tol: f64) -> Result<Vec<S>> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", self.n),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        let coords: Vec<S> = self
            .support
            .iter()
            .zip(&self.norms_sq)
            .map(|(entries, nsq)| {
                entries.iter().fold(S::zero(), |acc, (r, c, u)| acc + u.dot(m.get(*r, *c))) / nsq.clone()
            })
            .collect();
        let rebuilt = self.combine(&coords);
        let scale = m.max_abs().to_f64().max(1.0);
        if !rebuilt.approx_eq(m, tol * scale) {
            return Err(match (self.space, self.ring.contains(m, tol * scale)) {
                (_, false) => Error::RingMismatch(format!("entries outside the {} ring", self.ring)),
                (Space::Herm, true) => Error::NotHermitian,
                (Space::AHerm, true) => Error::NotSkew,
            });
        }
        Ok(coords)
    }

    /// `Σ c_i t_i`.
    pub fn combine(&self, coeffs: &[S]) -> QMatrix<S> {
        assert_eq!(coeffs.len(), self.len(), "coefficient count");
        let mut out = QMatrix::zeros(self.n, self.n);
        for (entries, c) in self.support.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (r, col, u) in entries {
                let updated = out.get(*r, *col) + &u.scale(c);
                out.set(*r, *col, updated);
            }
        }
        out
    }
}

pub fn herm_basis<S: Scalar>(ring: Ring, n: usize) -> BasisSet<S> {
    BasisSet::build(ring, n, Space::Herm)
}

pub fn aherm_basis<S: Scalar>(ring: Ring, n: usize) -> BasisSet<S> {
    BasisSet::build(ring, n, Space::AHerm)
}
