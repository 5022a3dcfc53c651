//! Quaternionic column vectors and matrices.
//!
//! Vectors form a right module: scalars multiply from the right, matrices act
//! from the left. `M_{ij} = <e_i, M e_j>` and `(M†)_{ij} = (M_{ji})*`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{shape_err, Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct QVector<S> {
    entries: Vec<Quaternion<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion<S>>,
}

/// Complex matrix stored as a quaternionic matrix with vanishing `j`, `k`
/// parts. Codomain of [`QMatrix::embed`].
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<S>(QMatrix<S>);

pub type QMatF = QMatrix<f64>;
pub type QMatQ = QMatrix<Rational>;
pub type QVecF = QVector<f64>;
pub type QVecQ = QVector<Rational>;

impl<S: Scalar> QVector<S> {
    pub fn new(entries: Vec<Quaternion<S>>) -> Self {
        QVector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        QVector::new(vec![Quaternion::zero(); n])
    }

    /// Canonical basis vector `e^(idx)` (0-based).
    pub fn basis(n: usize, idx: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[idx] = Quaternion::one();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Quaternion<S>] {
        &self.entries
    }

    pub fn get(&self, idx: usize) -> &Quaternion<S> {
        &self.entries[idx]
    }

    pub fn into_entries(self) -> Vec<Quaternion<S>> {
        self.entries
    }

    /// `<x, y> = Σ x_i* y_i`.
    pub fn inner(&self, other: &Self) -> Result<Quaternion<S>> {
        if self.len() != other.len() {
            return Err(shape_err(self.len(), other.len()));
        }
        Ok(self.entries.iter().zip(&other.entries).fold(Quaternion::zero(), |acc, (x, y)| &acc + &(&x.conj() * y)))
    }

    pub fn norm_sq(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, x| acc + x.modulus_sq())
    }

    /// `x α`.
    pub fn right_scale(&self, alpha: &Quaternion<S>) -> Self {
        QVector::new(self.entries.iter().map(|x| x * alpha).collect())
    }

    pub fn scale_real(&self, r: &S) -> Self {
        QVector::new(self.entries.iter().map(|x| x.scale(r)).collect())
    }

    /// Entrywise quaternion conjugate.
    pub fn conj(&self) -> Self {
        QVector::new(self.entries.iter().map(Quaternion::conj).collect())
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.entries.iter().all(|x| x.within(tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> QVector<T> {
        QVector::new(self.entries.iter().map(|x| x.map(f)).collect())
    }

    pub fn to_f64(&self) -> QVector<f64> {
        self.map(|x| x.to_f64())
    }

    /// As an `n x 1` matrix.
    pub fn to_column(&self) -> QMatrix<S> {
        QMatrix::from_vec(self.len(), 1, self.entries.clone())
    }

    pub fn max_abs(&self) -> S {
        max_abs_of(&self.entries)
    }
}

impl QVector<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

impl<S: Scalar> Add for &QVector<S> {
    type Output = QVector<S>;
    fn add(self, rhs: Self) -> QVector<S> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        QVector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect())
    }
}

impl<S: Scalar> Sub for &QVector<S> {
    type Output = QVector<S>;
    fn sub(self, rhs: Self) -> QVector<S> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        QVector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect())
    }
}

fn conj<S: Scalar>(z: &Complex<S>) -> Complex<S> {
    Complex::new(z.re.clone(), -z.im.clone())
}

fn neg_conj<S: Scalar>(z: &Complex<S>) -> Complex<S> {
    Complex::new(-z.re.clone(), z.im.clone())
}

fn max_abs_of<S: Scalar>(values: &[Quaternion<S>]) -> S {
    values.iter().fold(S::zero(), |acc, q| {
        let m = q.max_abs();
        if m > acc {
            m
        } else {
            acc
        }
    })
}

impl<S: Scalar> QMatrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion<S>>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<S>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(shape_err(format!("{c} columns"), format!("{} columns", bad.len())));
        }
        Ok(QMatrix::from_vec(r, c, rows.into_iter().flatten().collect()))
    }

    pub fn from_columns(columns: &[QVector<S>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, QVector::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(shape_err(format!("columns of length {rows}"), "ragged columns"));
        }
        Ok(QMatrix::from_fn(rows, cols, |r, c| columns[c].get(r).clone()))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Quaternion<S>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix::from_vec(rows, cols, vec![Quaternion::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Quaternion::one())
    }

    /// `q·𝟙`.
    pub fn scalar(n: usize, q: &Quaternion<S>) -> Self {
        QMatrix::from_fn(n, n, |r, c| if r == c { q.clone() } else { Quaternion::zero() })
    }

    pub fn diag(entries: &[Quaternion<S>]) -> Self {
        let n = entries.len();
        QMatrix::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { Quaternion::zero() })
    }

    /// Matrix unit `E_{pq}` scaled by `q` (0-based indices).
    pub fn unit(n: usize, p: usize, q_idx: usize, q: &Quaternion<S>) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(p, q_idx, q.clone());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Quaternion<S> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Quaternion<S>) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[Quaternion<S>] {
        &self.data
    }

    pub fn row_vectors(&self) -> Vec<Vec<Quaternion<S>>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> QVector<S> {
        QVector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(shape_err(format!("{}x{}", self.rows, self.cols), format!("{}x{}", other.rows, other.cols)))
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape_err(format!("{} rows on the right factor", self.cols), format!("{}", other.rows)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Quaternion<S>, &Quaternion<S>) -> Quaternion<S>) -> Self {
        QMatrix::from_vec(self.rows, self.cols, self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect())
    }

    pub fn scale_real(&self, r: &S) -> Self {
        self.map_entries(|q| q.scale(r))
    }

    /// `q·M` (entrywise left multiplication).
    pub fn left_scale(&self, q: &Quaternion<S>) -> Self {
        self.map_entries(|x| q * x)
    }

    /// `M·q` (entrywise right multiplication).
    pub fn right_scale(&self, q: &Quaternion<S>) -> Self {
        self.map_entries(|x| x * q)
    }

    pub fn map_entries(&self, f: impl Fn(&Quaternion<S>) -> Quaternion<S>) -> Self {
        QMatrix::from_vec(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> QMatrix<T> {
        QMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|q| q.map(f)).collect())
    }

    pub fn to_f64(&self) -> QMatrix<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn adjoint(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn apply(&self, x: &QVector<S>) -> Result<QVector<S>> {
        if x.len() != self.cols {
            return Err(shape_err(self.cols, x.len()));
        }
        Ok(QVector::new(
            (0..self.rows)
                .map(|r| (0..self.cols).fold(Quaternion::zero(), |acc, c| &acc + &(self.get(r, c) * x.get(c))))
                .collect(),
        ))
    }

    pub fn trace(&self) -> Result<Quaternion<S>> {
        let n = self.require_square()?;
        Ok((0..n).fold(Quaternion::zero(), |acc, i| &acc + self.get(i, i)))
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.try_sub(&other.matmul(self)?)
    }

    /// `Re tr(X† Y)`.
    pub fn frobenius_inner(&self, other: &Self) -> Result<S> {
        self.require_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).fold(S::zero(), |acc, (a, b)| acc + a.dot(b)))
    }

    pub fn frobenius_norm_sq(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, q| acc + q.modulus_sq())
    }

    /// Largest absolute component over all entries.
    pub fn max_abs(&self) -> S {
        max_abs_of(&self.data)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|q| q.within(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && (self - other).is_zero_within(tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.is_square() && (self + &self.adjoint()).is_zero_within(tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && (&self.adjoint() * self).approx_eq(&Self::identity(self.rows), tol)
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let adj = self.adjoint();
        (&adj * self).approx_eq(&(self * &adj), tol)
    }

    /// All entries have vanishing `j` and `k` parts.
    pub fn is_complex(&self, tol: f64) -> bool {
        self.data.iter().all(|q| q.is_complex(tol))
    }

    /// `H_c = ½(H + i H i*)`: keeps the complex part `a` of every entry `a + b j`.
    pub fn complex_part(&self) -> Result<Self> {
        self.require_square()?;
        let i = Quaternion::unit_i();
        let i_conj = i.conj();
        let half = S::from_ratio(1, 2);
        Ok(self.map_entries(|q| (q + &(&(&i * q) * &i_conj)).scale(&half)))
    }

    /// The embedding `A + Bj ↦ [[A, B], [-B̄, Ā]]` into `2n x 2n` complex matrices.
    pub fn embed(&self) -> Result<CMatrix<S>> {
        let n = self.require_square()?;
        let mut out = QMatrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let (a, b) = self.get(r, c).to_complex_pair();
                out.set(r, c, Quaternion::from_complex(a.clone()));
                out.set(r, c + n, Quaternion::from_complex(b.clone()));
                out.set(r + n, c, Quaternion::from_complex(neg_conj(&b)));
                out.set(r + n, c + n, Quaternion::from_complex(conj(&a)));
            }
        }
        Ok(CMatrix(out))
    }

    /// Left inverse of [`embed`](Self::embed): reads the top blocks `A + Bj`.
    /// ℝ-linear but not multiplicative.
    pub fn unembed(w: &CMatrix<S>) -> Result<Self> {
        let m = &w.0;
        let size = m.require_square()?;
        if !size.is_multiple_of(2) {
            return Err(Error::OddDimension(size));
        }
        let n = size / 2;
        Ok(QMatrix::from_fn(n, n, |r, c| {
            let (a, _) = m.get(r, c).to_complex_pair();
            let (b, _) = m.get(r, c + n).to_complex_pair();
            Quaternion::from_complex_pair(a, b)
        }))
    }
}

impl<S: Scalar> CMatrix<S> {
    /// Wrap a matrix whose entries are complex.
    pub fn new(m: QMatrix<S>) -> Result<Self> {
        if !m.is_complex(0.0) {
            return Err(Error::RingMismatch("complex matrix has j/k components".into()));
        }
        Ok(CMatrix(m))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex<S>) -> Self {
        CMatrix(QMatrix::from_fn(rows, cols, |r, c| Quaternion::from_complex(f(r, c))))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<S> {
        self.0.get(r, c).to_complex_pair().0
    }

    pub fn as_qmatrix(&self) -> &QMatrix<S> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        Ok(CMatrix(self.0.matmul(&other.0)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(CMatrix(self.0.try_add(&other.0)?))
    }

    pub fn scale_real(&self, r: &S) -> Self {
        CMatrix(self.0.scale_real(r))
    }

    /// Block form `[[A, B], [-B̄, Ā]]` within `tol`.
    pub fn in_image_of_embed(&self, tol: f64) -> bool {
        let size = self.rows();
        if size != self.cols() || !size.is_multiple_of(2) {
            return false;
        }
        let n = size / 2;
        let close = |x: Complex<S>, y: Complex<S>| (x.re - y.re).within(tol) && (x.im - y.im).within(tol);
        (0..n).all(|r| {
            (0..n).all(|c| {
                let a = self.get(r, c);
                let b = self.get(r, c + n);
                close(self.get(r + n, c), neg_conj(&b)) && close(self.get(r + n, c + n), conj(&a))
            })
        })
    }
}

impl CMatrix<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows(), self.cols(), |r, c| self.get(r, c))
    }

    pub fn from_nalgebra(m: &DMatrix<Complex<f64>>) -> Self {
        CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl<S: Scalar> Add for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn add(self, rhs: Self) -> QMatrix<S> {
        self.try_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl<S: Scalar> Sub for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn sub(self, rhs: Self) -> QMatrix<S> {
        self.try_sub(rhs).expect("matrix subtraction shape mismatch")
    }
}

impl<S: Scalar> Mul for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn mul(self, rhs: Self) -> QMatrix<S> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<S: Scalar> Neg for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn neg(self) -> QMatrix<S> {
        self.map_entries(|q| -q)
    }
}

impl<S: Scalar> fmt::Display for QMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("({})", self.get(r, c))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
