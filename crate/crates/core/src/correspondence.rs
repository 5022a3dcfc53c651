//! Dynamical correspondences: ℝ-linear maps from self-adjoint to skew-adjoint
//! matrices, stored as coefficient matrices over the canonical bases.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernelsolver::basis::{aherm_basis, herm_basis, BasisSet, Ring};
use crate::linsolve;
use crate::qmatrix::{QMatF, QMatrix};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;
use crate::spectral::canonical_spectral;

/// `Φ(H) = iλH + i tr(BH) 𝟙` over ℂ.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGenSpec<S> {
    pub lambda: S,
    pub b: QMatrix<S>,
}

impl<S: Scalar> ComplexGenSpec<S> {
    pub fn new(lambda: S, b: QMatrix<S>) -> Result<Self> {
        let tol = S::default_tol() * b.max_abs().to_f64().max(1.0);
        if !b.is_square() {
            return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
        }
        if !b.is_hermitian(tol) {
            return Err(Error::NotHermitian);
        }
        if !b.is_complex(tol) {
            return Err(Error::RingMismatch("B must have complex entries".into()));
        }
        Ok(ComplexGenSpec { lambda, b })
    }

    /// `λ = -1/ℏ`, `B = 0`: the usual Schrödinger correspondence.
    pub fn schroedinger(n: usize, hbar: S) -> Result<Self> {
        let lambda = -(hbar.checked_recip().ok_or(Error::DivisionByZero)?);
        Ok(ComplexGenSpec { lambda, b: QMatrix::zeros(n, n) })
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }
}

/// `Φ(H) = AH + HA - tr(H) A` over ℍ; the generator of time shifts is `Φ(H)/ℏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatGenSpec<S> {
    pub a: QMatrix<S>,
    pub hbar: S,
}

impl<S: Scalar> QuatGenSpec<S> {
    pub fn new(a: QMatrix<S>, hbar: S) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if !a.is_skew(S::default_tol() * a.max_abs().to_f64().max(1.0)) {
            return Err(Error::NotSkew);
        }
        if hbar.to_f64() <= 0.0 {
            return Err(Error::Precondition("hbar must be positive".into()));
        }
        Ok(QuatGenSpec { a, hbar })
    }

    /// Spec with `ℏ = 1`.
    pub fn with_unit_hbar(a: QMatrix<S>) -> Result<Self> {
        Self::new(a, S::one())
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

fn check_hermitian<S: Scalar>(h: &QMatrix<S>, n: usize) -> Result<()> {
    if h.rows() != n || h.cols() != n {
        return Err(Error::ShapeMismatch { expected: format!("{n}x{n}"), found: format!("{}x{}", h.rows(), h.cols()) });
    }
    if !h.is_hermitian(S::default_tol() * h.max_abs().to_f64().max(1.0)) {
        return Err(Error::NotHermitian);
    }
    Ok(())
}

fn imaginary_unit<S: Scalar>() -> Quaternion<S> {
    Quaternion::unit_i()
}

pub fn phi_complex<S: Scalar>(spec: &ComplexGenSpec<S>, h: &QMatrix<S>) -> Result<QMatrix<S>> {
    let n = spec.n();
    check_hermitian(h, n)?;
    if !h.is_complex(S::default_tol() * h.max_abs().to_f64().max(1.0)) {
        return Err(Error::RingMismatch("H must have complex entries".into()));
    }
    let i = imaginary_unit::<S>();
    let first = h.left_scale(&i.scale(&spec.lambda));
    let tr = spec.b.matmul(h)?.trace()?;
    let second = QMatrix::scalar(n, &(&i * &Quaternion::real(tr.re)));
    Ok(&first + &second)
}

pub fn phi_quat<S: Scalar>(spec: &QuatGenSpec<S>, h: &QMatrix<S>) -> Result<QMatrix<S>> {
    check_hermitian(h, spec.n())?;
    let a = &spec.a;
    let ah = a.matmul(h)?;
    let ha = h.matmul(a)?;
    let tr = h.trace()?.re;
    Ok(&(&ah + &ha) - &a.scale_real(&tr))
}

/// `H ↦ -(i/ℏ) H` on Hamiltonians with complex entries.
pub fn phi_restricted<S: Scalar>(h: &QMatrix<S>, hbar: &S) -> Result<QMatrix<S>> {
    check_hermitian(h, h.rows())?;
    if !h.is_complex(S::default_tol() * h.max_abs().to_f64().max(1.0)) {
        return Err(Error::Precondition("Hamiltonian not purely complex".into()));
    }
    let inv = hbar.checked_recip().ok_or(Error::DivisionByZero)?;
    Ok(h.left_scale(&imaginary_unit::<S>().scale(&-inv)))
}

/// `-(i/ℏ)[H_c - ½ tr(H_c) 𝟙]` with `H_c = ½(H + iHi*)`, for `2 x 2` Hermitian `H`.
pub fn complex_part_generator<S: Scalar>(h: &QMatrix<S>, hbar: &S) -> Result<QMatrix<S>> {
    if h.rows() != 2 {
        return Err(Error::Precondition(format!("complex-part generator needs n = 2, got {}", h.rows())));
    }
    check_hermitian(h, 2)?;
    let hc = h.complex_part()?;
    let half_tr = hc.trace()?.re * S::from_ratio(1, 2);
    let shifted = &hc - &QMatrix::scalar(2, &Quaternion::real(half_tr));
    let inv = hbar.checked_recip().ok_or(Error::DivisionByZero)?;
    Ok(shifted.left_scale(&imaginary_unit::<S>().scale(&-inv)))
}

/// `Ψ(H) = U_H† i D_H U_H` from the canonical spectral decomposition.
pub fn psi_nonadditive(h: &QMatF) -> Result<QMatF> {
    let dec = canonical_spectral(h)?;
    let id = dec.d.left_scale(&Quaternion::unit_i());
    Ok(&(&dec.u.adjoint() * &id) * &dec.u)
}

#[derive(Debug)]
struct Bases<S> {
    herm: BasisSet<S>,
    aherm: BasisSet<S>,
}

/// ℝ-linear map `Herm(n) → AHerm(n)` with `Φ(t_ℓ) = Σ_a P[ℓ][a] s_a`.
#[derive(Clone, Debug)]
pub struct DynamicalMap<S> {
    ring: Ring,
    n: usize,
    p: Vec<Vec<S>>,
    bases: Arc<Bases<S>>,
}

impl<S: Scalar> PartialEq for DynamicalMap<S> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.n == other.n && self.p == other.p
    }
}

impl<S: Scalar> DynamicalMap<S> {
    fn bases(ring: Ring, n: usize) -> Arc<Bases<S>> {
        Arc::new(Bases { herm: herm_basis(ring, n), aherm: aherm_basis(ring, n) })
    }

    /// Map with the given coefficient matrix (`dim Herm` rows of `dim AHerm` entries).
    pub fn from_coefficients(ring: Ring, n: usize, p: Vec<Vec<S>>) -> Result<Self> {
        let (rows, cols) = (ring.dim_herm(n), ring.dim_aherm(n));
        if p.len() != rows || p.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch {
                expected: format!("{rows}x{cols} coefficients"),
                found: format!("{} rows", p.len()),
            });
        }
        Ok(DynamicalMap { ring, n, p, bases: Self::bases(ring, n) })
    }

    /// Flat row-major coefficient vector of length `dim Herm · dim AHerm`.
    pub fn from_flat(ring: Ring, n: usize, flat: &[S]) -> Result<Self> {
        let cols = ring.dim_aherm(n);
        if flat.len() != ring.dim_herm(n) * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coefficients", ring.dim_herm(n) * cols),
                found: flat.len().to_string(),
            });
        }
        Self::from_coefficients(ring, n, flat.chunks(cols).map(<[S]>::to_vec).collect())
    }

    pub fn zero(ring: Ring, n: usize) -> Self {
        let p = vec![vec![S::zero(); ring.dim_aherm(n)]; ring.dim_herm(n)];
        DynamicalMap { ring, n, p, bases: Self::bases(ring, n) }
    }

    /// Tabulate `f` on the Hermitian basis; every value must be skew-adjoint
    /// with entries in the ring.
    pub fn from_fn(ring: Ring, n: usize, f: impl Fn(&QMatrix<S>) -> Result<QMatrix<S>>) -> Result<Self> {
        let bases = Self::bases(ring, n);
        let tol = S::default_tol();
        let p =
            bases.herm.elements().iter().map(|t| bases.aherm.coordinates(&f(t)?, tol)).collect::<Result<Vec<_>>>()?;
        Ok(DynamicalMap { ring, n, p, bases })
    }

    pub fn from_quat_spec(spec: &QuatGenSpec<S>) -> Result<Self> {
        Self::from_fn(Ring::Quaternionic, spec.n(), |h| phi_quat(spec, h))
    }

    pub fn from_complex_spec(spec: &ComplexGenSpec<S>) -> Result<Self> {
        Self::from_fn(Ring::Complex, spec.n(), |h| phi_complex(spec, h))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Vec<S>] {
        &self.p
    }

    pub fn flat_coefficients(&self) -> Vec<S> {
        self.p.iter().flatten().cloned().collect()
    }

    pub fn herm_basis(&self) -> &BasisSet<S> {
        &self.bases.herm
    }

    pub fn aherm_basis(&self) -> &BasisSet<S> {
        &self.bases.aherm
    }

    /// `Φ(t_ℓ)`.
    pub fn image_of_basis(&self, l: usize) -> QMatrix<S> {
        self.bases.aherm.combine(&self.p[l])
    }

    pub fn evaluate(&self, h: &QMatrix<S>) -> Result<QMatrix<S>> {
        let tol = S::default_tol();
        let coords = self.bases.herm.coordinates(h, tol)?;
        let mut out = vec![S::zero(); self.bases.aherm.len()];
        for (c, row) in coords.iter().zip(&self.p) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o = o.clone() + c.clone() * v.clone();
            }
        }
        Ok(self.bases.aherm.combine(&out))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.n != other.n {
            return Err(Error::ShapeMismatch {
                expected: format!("{} map with n = {}", self.ring, self.n),
                found: format!("{} map with n = {}", other.ring, other.n),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        Ok(DynamicalMap { p, ..self.clone() })
    }

    pub fn scale(&self, r: &S) -> Self {
        let p = self.p.iter().map(|row| row.iter().map(|x| x.clone() * r.clone()).collect()).collect();
        DynamicalMap { p, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.p.iter().flatten().all(|v| v.within(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.check_compatible(other).is_ok()
            && self.p.iter().flatten().zip(other.p.iter().flatten()).all(|(a, b)| (a.clone() - b.clone()).within(tol))
    }

    /// Rank of `P` over ℝ.
    pub fn real_rank(&self) -> usize {
        linsolve::rank(&self.p, self.bases.aherm.len(), S::default_tol() * 1e2)
    }

    /// Largest entry of `𝒬_Φ(t_i, t_j)` over all basis pairs `i <= j`.
    pub fn max_basis_defect(&self) -> S {
        let herm = self.bases.herm.elements();
        let images: Vec<QMatrix<S>> = (0..herm.len()).map(|l| self.image_of_basis(l)).collect();
        let mut worst = S::zero();
        for i in 0..herm.len() {
            for j in i..herm.len() {
                let d = &(&(&images[i] * &herm[j]) - &(&herm[j] * &images[i]))
                    + &(&(&images[j] * &herm[i]) - &(&herm[i] * &images[j]));
                let m = d.max_abs();
                if m > worst {
                    worst = m;
                }
            }
        }
        worst
    }

    pub fn to_f64(&self) -> DynamicalMap<f64> {
        DynamicalMap::from_coefficients(
            self.ring,
            self.n,
            self.p.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
        )
        .expect("same shape")
    }
}

/// `𝒬_Φ(X, Y) = [Φ(X), Y] + [Φ(Y), X]`.
pub fn commutation_defect<S: Scalar>(map: &DynamicalMap<S>, x: &QMatrix<S>, y: &QMatrix<S>) -> Result<QMatrix<S>> {
    let fx = map.evaluate(x)?;
    let fy = map.evaluate(y)?;
    fx.commutator(y)?.try_add(&fy.commutator(x)?)
}

/// `Φ_V : H ↦ V Φ(V† H V) V†`.
pub fn conjugate_map<S: Scalar>(map: &DynamicalMap<S>, v: &QMatrix<S>) -> Result<DynamicalMap<S>> {
    let tol = S::default_tol() * 1e2;
    if v.rows() != map.n() || !v.is_unitary(tol) {
        return Err(Error::NotUnitary);
    }
    if !map.ring().contains(v, tol) {
        return Err(Error::RingMismatch(format!("V must have entries in the {} ring", map.ring())));
    }
    let vd = v.adjoint();
    DynamicalMap::from_fn(map.ring(), map.n(), |h| {
        let inner = vd.matmul(h)?.matmul(v)?;
        let inner = symmetrize(&inner);
        v.matmul(&map.evaluate(&inner)?)?.matmul(&vd)
    })
}

/// `½(M + M†)`; removes rounding noise so floating inputs stay in `Herm`.
fn symmetrize<S: Scalar>(m: &QMatrix<S>) -> QMatrix<S> {
    if S::EXACT {
        m.clone()
    } else {
        (m + &m.adjoint()).scale_real(&S::from_ratio(1, 2))
    }
}

/// Extension `Φ_e(M₁ + iM₂) = Φ(M₁) + iΦ(M₂)` of a complex correspondence to
/// all complex matrices.
#[derive(Clone, Debug)]
pub struct ExtendedMap<S> {
    base: DynamicalMap<S>,
}

pub fn extend_complex<S: Scalar>(map: &DynamicalMap<S>) -> Result<ExtendedMap<S>> {
    if map.ring() != Ring::Complex {
        return Err(Error::RingMismatch("extension is defined for complex maps".into()));
    }
    Ok(ExtendedMap { base: map.clone() })
}

impl<S: Scalar> ExtendedMap<S> {
    pub fn base(&self) -> &DynamicalMap<S> {
        &self.base
    }

    /// Hermitian parts `(M₁, M₂)` with `M = M₁ + iM₂`.
    pub fn split(m: &QMatrix<S>) -> Result<(QMatrix<S>, QMatrix<S>)> {
        let half = S::from_ratio(1, 2);
        let md = m.adjoint();
        let m1 = m.try_add(&md)?.scale_real(&half);
        let m2 = m.try_sub(&md)?.left_scale(&Quaternion::unit_i().scale(&-half));
        Ok((m1, m2))
    }

    pub fn evaluate(&self, m: &QMatrix<S>) -> Result<QMatrix<S>> {
        if !m.is_complex(S::default_tol() * m.max_abs().to_f64().max(1.0)) {
            return Err(Error::RingMismatch("extension takes complex matrices".into()));
        }
        let (m1, m2) = Self::split(m)?;
        let f2 = self.base.evaluate(&m2)?.left_scale(&Quaternion::unit_i());
        self.base.evaluate(&m1)?.try_add(&f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn q(re: i64, i: i64, j: i64, k: i64) -> Quaternion<Q> {
        Quaternion::from_ints(re, i, j, k)
    }

    fn diag(entries: &[Quaternion<Q>]) -> QMatrix<Q> {
        QMatrix::diag(entries)
    }

    #[test]
    fn phi_complex_examples() {
        let h =
            QMatrix::from_rows(vec![vec![q(1, 0, 0, 0), q(2, 1, 0, 0)], vec![q(2, -1, 0, 0), q(-3, 0, 0, 0)]]).unwrap();
        let hbar = Q::from_i64(2);
        let spec = ComplexGenSpec::schroedinger(2, hbar.clone()).unwrap();
        let expected = h.left_scale(&Quaternion::new(Q::zero(), Q::from_ratio(-1, 2), Q::zero(), Q::zero()));
        assert_eq!(phi_complex(&spec, &h).unwrap(), expected);

        let spec = ComplexGenSpec::new(Q::zero(), QMatrix::identity(2)).unwrap();
        let tr = h.trace().unwrap();
        assert_eq!(phi_complex(&spec, &h).unwrap(), QMatrix::scalar(2, &(&q(0, 1, 0, 0) * &tr)));

        let spec = ComplexGenSpec::new(Q::one(), QMatrix::zeros(2, 2)).unwrap();
        let h = diag(&[q(1, 0, 0, 0), q(-1, 0, 0, 0)]);
        assert_eq!(phi_complex(&spec, &h).unwrap(), diag(&[q(0, 1, 0, 0), q(0, -1, 0, 0)]));
    }

    #[test]
    fn phi_complex_rejects_non_hermitian() {
        let spec = ComplexGenSpec::new(Q::one(), QMatrix::zeros(2, 2)).unwrap();
        let m = QMatrix::unit(2, 0, 1, &q(1, 0, 0, 0));
        assert_eq!(phi_complex(&spec, &m), Err(Error::NotHermitian));
    }

    #[test]
    fn phi_quat_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<Q, _>(&mut rng, 2)).unwrap();
        assert!(phi_quat(&spec, &QMatrix::identity(2)).unwrap().is_zero_within(0.0));

        let spec = QuatGenSpec::with_unit_hbar(diag(&[q(0, 1, 0, 0), q(0, 0, 0, 0)])).unwrap();
        let h = diag(&[q(1, 0, 0, 0), q(0, 0, 0, 0)]);
        assert_eq!(phi_quat(&spec, &h).unwrap(), diag(&[q(0, 1, 0, 0), q(0, 0, 0, 0)]));

        let spec = QuatGenSpec::with_unit_hbar(diag(&[q(0, 1, 0, 0)])).unwrap();
        assert_eq!(phi_quat(&spec, &diag(&[q(2, 0, 0, 0)])).unwrap(), diag(&[q(0, 2, 0, 0)]));
    }

    #[test]
    fn phi_quat_commutes_with_its_argument_for_two_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let spec = QuatGenSpec::with_unit_hbar(random::skew::<Q, _>(&mut rng, 2)).unwrap();
            let h = random::hermitian::<Q, _>(&mut rng, 2);
            let phi = phi_quat(&spec, &h).unwrap();
            assert!(phi.is_skew(0.0));
            assert!(phi.commutator(&h).unwrap().is_zero_within(0.0));
        }
    }

    #[test]
    fn phi_quat_fails_commutation_at_three_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<Q, _>(&mut rng, 3)).unwrap();
        let witness = (0..20).any(|_| {
            let h = random::hermitian::<Q, _>(&mut rng, 3);
            !phi_quat(&spec, &h).unwrap().commutator(&h).unwrap().is_zero_within(0.0)
        });
        assert!(witness);
    }

    #[test]
    fn dynamical_map_is_linear_and_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<Q, _>(&mut rng, 2)).unwrap();
        let map = DynamicalMap::from_quat_spec(&spec).unwrap();
        for _ in 0..10 {
            let x = random::hermitian::<Q, _>(&mut rng, 2);
            let y = random::hermitian::<Q, _>(&mut rng, 2);
            let r: Q = random::scalar(&mut rng);
            assert_eq!(map.evaluate(&x).unwrap(), phi_quat(&spec, &x).unwrap());
            let sum = map.evaluate(&(&x + &y.scale_real(&r))).unwrap();
            let parts = &map.evaluate(&x).unwrap() + &map.evaluate(&y).unwrap().scale_real(&r);
            assert_eq!(sum, parts);
        }
    }

    #[test]
    fn commutation_defect_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<Q, _>(&mut rng, 2)).unwrap();
        let map = DynamicalMap::from_quat_spec(&spec).unwrap();
        let x = random::hermitian::<Q, _>(&mut rng, 2);
        let y = random::hermitian::<Q, _>(&mut rng, 2);
        assert!(commutation_defect(&map, &x, &y).unwrap().is_zero_within(0.0));
        let fx = map.evaluate(&x).unwrap();
        let twice = fx.commutator(&x).unwrap().scale_real(&Q::from_i64(2));
        assert_eq!(commutation_defect(&map, &x, &x).unwrap(), twice);

        let times_i = DynamicalMap::from_fn(Ring::Quaternionic, 2, |h| Ok(h.left_scale(&q(0, 1, 0, 0)))).unwrap_err();
        assert_eq!(times_i, Error::NotSkew);
        let left_right = DynamicalMap::from_fn(Ring::Quaternionic, 2, |h| {
            Ok(&h.left_scale(&q(0, 1, 0, 0)) + &h.right_scale(&q(0, 1, 0, 0)))
        })
        .unwrap();
        let xj =
            QMatrix::from_rows(vec![vec![q(1, 0, 0, 0), q(0, 0, 1, 0)], vec![q(0, 0, -1, 0), q(0, 0, 0, 0)]]).unwrap();
        assert!(!commutation_defect(&left_right, &xj, &xj).unwrap().is_zero_within(0.0));
        assert!(left_right.max_basis_defect() > Q::zero());
    }

    #[test]
    fn real_rank_examples() {
        let a = diag(&[q(0, 1, 0, 0), q(0, 0, 0, 0)]);
        let map = DynamicalMap::from_quat_spec(&QuatGenSpec::with_unit_hbar(a).unwrap()).unwrap();
        assert_eq!(map.real_rank(), 5);
        let hbar = Q::from_i64(3);
        let a = QMatrix::scalar(2, &Quaternion::new(Q::zero(), Q::from_ratio(-1, 6), Q::zero(), Q::zero()));
        let map = DynamicalMap::from_quat_spec(&QuatGenSpec::new(a, hbar).unwrap()).unwrap();
        assert_eq!(map.real_rank(), 3);
        assert_eq!(DynamicalMap::<Q>::zero(Ring::Quaternionic, 2).real_rank(), 0);
    }

    #[test]
    fn conjugation_by_j_negates() {
        let a = diag(&[q(0, 3, 0, 0), q(0, -1, 0, 0)]);
        let spec = QuatGenSpec::with_unit_hbar(a).unwrap();
        let map = DynamicalMap::from_quat_spec(&spec).unwrap();
        let v = QMatrix::scalar(2, &q(0, 0, 1, 0));
        assert_eq!(conjugate_map(&map, &v).unwrap(), map.neg());
        assert_eq!(conjugate_map(&map, &QMatrix::identity(2)).unwrap(), map);
    }

    #[test]
    fn conjugation_matches_rotated_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<f64, _>(&mut rng, 2)).unwrap();
        let map = DynamicalMap::from_quat_spec(&spec).unwrap();
        let v = random::unitary(&mut rng, 2);
        let conj = conjugate_map(&map, &v).unwrap();
        let av = &(&v * &spec.a) * &v.adjoint();
        let rotated = DynamicalMap::from_quat_spec(&QuatGenSpec::with_unit_hbar(av).unwrap()).unwrap();
        assert!(conj.approx_eq(&rotated, 1e-10));
        let back = conjugate_map(&conj, &v.adjoint()).unwrap();
        assert!(back.approx_eq(&map, 1e-10));
        let not_unitary = QMatrix::identity(2).scale_real(&2.0);
        assert_eq!(conjugate_map(&map, &not_unitary).unwrap_err(), Error::NotUnitary);
    }

    #[test]
    fn complex_covariance_depends_on_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let scalar_b = ComplexGenSpec::new(0.7, QMatrix::identity(2).scale_real(&-0.4)).unwrap();
        let map = DynamicalMap::from_complex_spec(&scalar_b).unwrap();
        for _ in 0..10 {
            let v = random::complex_unitary(&mut rng, 2);
            assert!(conjugate_map(&map, &v).unwrap().approx_eq(&map, 1e-10));
        }
        let generic = ComplexGenSpec::new(0.7, random::complex_hermitian(&mut rng, 2)).unwrap();
        let map = DynamicalMap::from_complex_spec(&generic).unwrap();
        let v = random::complex_unitary(&mut rng, 2);
        assert!(!conjugate_map(&map, &v).unwrap().approx_eq(&map, 1e-6));
    }

    #[test]
    fn extension_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let spec = ComplexGenSpec::new(Q::from_ratio(3, 2), random::complex_hermitian(&mut rng, 2)).unwrap();
        let map = DynamicalMap::from_complex_spec(&spec).unwrap();
        let ext = extend_complex(&map).unwrap();
        let h = random::complex_hermitian::<Q, _>(&mut rng, 2);
        assert_eq!(ext.evaluate(&h).unwrap(), map.evaluate(&h).unwrap());
        let ih = h.left_scale(&q(0, 1, 0, 0));
        assert_eq!(ext.evaluate(&ih).unwrap(), map.evaluate(&h).unwrap().left_scale(&q(0, 1, 0, 0)));

        let schroedinger =
            DynamicalMap::from_complex_spec(&ComplexGenSpec::schroedinger(2, Q::one()).unwrap()).unwrap();
        let ext = extend_complex(&schroedinger).unwrap();
        for _ in 0..5 {
            let x = random::matrix::<Q, _>(&mut rng, 2, 2).complex_part().unwrap();
            assert!(ext.evaluate(&x).unwrap().commutator(&x).unwrap().is_zero_within(0.0));
        }
        assert!(extend_complex(&DynamicalMap::<Q>::zero(Ring::Quaternionic, 2)).is_err());
    }

    #[test]
    fn restricted_correspondence() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let hbar = Q::from_i64(2);
        let h = random::complex_hermitian::<Q, _>(&mut rng, 3);
        let out = phi_restricted(&h, &hbar).unwrap();
        assert_eq!(out, h.left_scale(&Quaternion::new(Q::zero(), Q::from_ratio(-1, 2), Q::zero(), Q::zero())));
        assert!(out.commutator(&h).unwrap().is_zero_within(0.0));
        let hj =
            QMatrix::from_rows(vec![vec![q(0, 0, 0, 0), q(0, 0, 1, 0)], vec![q(0, 0, -1, 0), q(0, 0, 0, 0)]]).unwrap();
        assert!(matches!(phi_restricted(&hj, &hbar), Err(Error::Precondition(_))));
    }

    #[test]
    fn complex_part_generator_examples() {
        let hbar = Q::from_i64(1);
        let h =
            QMatrix::from_rows(vec![vec![q(1, 0, 0, 0), q(0, 2, 0, 0)], vec![q(0, -2, 0, 0), q(-1, 0, 0, 0)]]).unwrap();
        assert_eq!(complex_part_generator(&h, &hbar).unwrap(), h.left_scale(&q(0, -1, 0, 0)));
        let hj =
            QMatrix::from_rows(vec![vec![q(0, 0, 0, 0), q(0, 0, 1, 0)], vec![q(0, 0, -1, 0), q(0, 0, 0, 0)]]).unwrap();
        assert!(complex_part_generator(&hj, &hbar).unwrap().is_zero_within(0.0));
        assert!(complex_part_generator(&QMatrix::<Q>::identity(3), &hbar).is_err());
    }

    #[test]
    fn complex_part_generator_equals_scalar_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let hbar = Q::from_ratio(3, 2);
        let a = QMatrix::scalar(2, &Quaternion::new(Q::zero(), Q::from_ratio(-1, 3), Q::zero(), Q::zero()));
        let spec = QuatGenSpec::new(a, hbar.clone()).unwrap();
        for _ in 0..50 {
            let h = random::hermitian::<Q, _>(&mut rng, 2);
            assert_eq!(complex_part_generator(&h, &hbar).unwrap(), phi_quat(&spec, &h).unwrap());
        }
    }

    #[test]
    fn psi_examples() {
        let h = QMatrix::diag(&[Quaternion::real(2.0), Quaternion::real(1.0)]);
        let expected = QMatrix::diag(&[Quaternion::new(0.0, 2.0, 0.0, 0.0), Quaternion::new(0.0, 1.0, 0.0, 0.0)]);
        assert!(psi_nonadditive(&h).unwrap().approx_eq(&expected, 1e-12));
        assert!(psi_nonadditive(&QMatrix::zeros(2, 2)).unwrap().is_zero_within(0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let h = random::hermitian::<f64, _>(&mut rng, 2);
            let psi = psi_nonadditive(&h).unwrap();
            assert!(psi.is_skew(1e-12));
            assert!(psi.commutator(&h).unwrap().is_zero_within(1e-9));
            for r in [2.0, 1.0 / 3.0] {
                let scaled = psi_nonadditive(&h.scale_real(&r)).unwrap();
                assert!(scaled.approx_eq(&psi.scale_real(&r), 1e-9));
            }
        }
    }
}
