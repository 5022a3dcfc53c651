//! Compression of a correspondence on `Herm(n, ℍ)` to `Herm(3, ℍ)` through a
//! linear isometry `τ: ℍ³ → ℍⁿ` whose range contains three given vectors.

use crate::correspondence::DynamicalMap;
use crate::error::{Error, Result};
use crate::kernelsolver::basis::Ring;
use crate::qmatrix::{QMatrix, QVector};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// Relative tolerance below which a floating residual counts as dependent.
pub const DEPENDENCE_TOL: f64 = 1e-12;

/// Orthonormalize with right scalars: `w = v - Σ_p u_p <u_p, v>`, then
/// `u = w c` with `|c|² = 1/‖w‖²`. Exact mode yields `<u_p, u_q> = δ_pq` exactly.
pub fn gram_schmidt<S: Scalar>(vectors: &[QVector<S>]) -> Result<Vec<QVector<S>>> {
    let mut out: Vec<QVector<S>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if let Some(first) = out.first() {
            if first.len() != v.len() {
                return Err(Error::ShapeMismatch {
                    expected: format!("length {}", first.len()),
                    found: v.len().to_string(),
                });
            }
        }
        let mut w = v.clone();
        for u in &out {
            let coeff = u.inner(v)?;
            w = &w - &u.right_scale(&coeff);
        }
        let norm_sq = w.norm_sq();
        let dependent =
            if S::EXACT { norm_sq.is_zero() } else { norm_sq.to_f64() <= DEPENDENCE_TOL * v.norm_sq().to_f64() };
        if dependent {
            return Err(Error::LinearlyDependent);
        }
        let c = Quaternion::from_array(S::unit_scale(&norm_sq)?);
        out.push(w.right_scale(&c));
    }
    Ok(out)
}

/// `X_ij = u_i u_j*`, so that `X v = u <u, v>`.
pub fn rank_one<S: Scalar>(u: &QVector<S>) -> QMatrix<S> {
    let n = u.len();
    QMatrix::from_fn(n, n, |i, j| u.get(i) * &u.get(j).conj())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryTriple<S> {
    pub x: QVector<S>,
    pub y: QVector<S>,
    pub z: QVector<S>,
    /// `n x 3`, orthonormal columns spanning `x, y, z`.
    pub tau: QMatrix<S>,
    /// `τ τ†`.
    pub pi: QMatrix<S>,
}

pub fn build_isometry<S: Scalar>(x: &QVector<S>, y: &QVector<S>, z: &QVector<S>) -> Result<IsometryTriple<S>> {
    if x.len() < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {}", x.len())));
    }
    let columns = gram_schmidt(&[x.clone(), y.clone(), z.clone()])?;
    let tau = QMatrix::from_columns(&columns)?;
    let pi = tau.matmul(&tau.adjoint())?;
    Ok(IsometryTriple { x: x.clone(), y: y.clone(), z: z.clone(), tau, pi })
}

impl<S: Scalar> IsometryTriple<S> {
    /// Largest deviation among `τ†τ = 𝟙`, `π² = π`, `π† = π`, `πx = x`, `πy = y`, `πz = z`.
    pub fn max_defect(&self) -> Result<S> {
        let mut worst = self.tau.adjoint().matmul(&self.tau)?.try_sub(&QMatrix::identity(3))?.max_abs();
        let mut take = |v: S| {
            if v > worst {
                worst = v;
            }
        };
        take(self.pi.matmul(&self.pi)?.try_sub(&self.pi)?.max_abs());
        take(self.pi.adjoint().try_sub(&self.pi)?.max_abs());
        for v in [&self.x, &self.y, &self.z] {
            take((&self.pi.apply(v)? - v).max_abs());
        }
        Ok(worst)
    }

    /// `τ† v`.
    pub fn pull_back(&self, v: &QVector<S>) -> Result<QVector<S>> {
        self.tau.adjoint().apply(v)
    }
}

fn symmetrize<S: Scalar>(m: QMatrix<S>) -> QMatrix<S> {
    if S::EXACT {
        m
    } else {
        (&m + &m.adjoint()).scale_real(&S::from_ratio(1, 2))
    }
}

fn check_compatible<S: Scalar>(phi: &DynamicalMap<S>, iso: &IsometryTriple<S>) -> Result<()> {
    if phi.ring() != Ring::Quaternionic {
        return Err(Error::RingMismatch("compression acts on quaternionic maps".into()));
    }
    if iso.tau.rows() != phi.n() {
        return Err(Error::ShapeMismatch {
            expected: format!("isometry into dimension {}", phi.n()),
            found: iso.tau.rows().to_string(),
        });
    }
    Ok(())
}

/// `Φ₃(H) = τ† Φ(τ H τ†) τ` for a single `3 x 3` Hermitian `H`.
pub fn compress_apply<S: Scalar>(phi: &DynamicalMap<S>, iso: &IsometryTriple<S>, h: &QMatrix<S>) -> Result<QMatrix<S>> {
    check_compatible(phi, iso)?;
    let tau = &iso.tau;
    let tau_adj = tau.adjoint();
    let lifted = symmetrize(tau.matmul(h)?.matmul(&tau_adj)?);
    let out = tau_adj.matmul(&phi.evaluate(&lifted)?)?.matmul(tau)?;
    Ok(if S::EXACT { out } else { (&out - &out.adjoint()).scale_real(&S::from_ratio(1, 2)) })
}

/// The compressed map `Φ₃` on `Herm(3, ℍ)`.
pub fn compress_map<S: Scalar>(phi: &DynamicalMap<S>, iso: &IsometryTriple<S>) -> Result<DynamicalMap<S>> {
    check_compatible(phi, iso)?;
    DynamicalMap::from_fn(Ring::Quaternionic, 3, |h| compress_apply(phi, iso, h))
}

/// `|<y', Φ₃(X') z'> - <y, Φ(X) z>|_max` with `X = x x†`, `X' = τ†Xτ`,
/// `y' = τ†y`, `z' = τ†z`.
pub fn matrix_element_defect<S: Scalar>(phi: &DynamicalMap<S>, iso: &IsometryTriple<S>) -> Result<S> {
    let x = rank_one(&iso.x);
    let x3 = symmetrize(iso.tau.adjoint().matmul(&x)?.matmul(&iso.tau)?);
    let y3 = iso.pull_back(&iso.y)?;
    let z3 = iso.pull_back(&iso.z)?;
    let lhs = y3.inner(&compress_apply(phi, iso, &x3)?.apply(&z3)?)?;
    let rhs = iso.y.inner(&phi.evaluate(&x)?.apply(&iso.z)?)?;
    Ok((&lhs - &rhs).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn e(n: usize, idx: usize) -> QVector<Q> {
        QVector::basis(n, idx)
    }

    fn independent_triple(rng: &mut ChaCha8Rng, n: usize) -> (QVector<Q>, QVector<Q>, QVector<Q>) {
        loop {
            let x = random::small_int_vector(rng, n, 2);
            let y = random::small_int_vector(rng, n, 2);
            let z = random::small_int_vector(rng, n, 2);
            if gram_schmidt(&[x.clone(), y.clone(), z.clone()]).is_ok() {
                return (x, y, z);
            }
        }
    }

    #[test]
    fn canonical_vectors_are_unchanged() {
        let out = gram_schmidt(&[e(3, 0), e(3, 1)]).unwrap();
        assert_eq!(out, vec![e(3, 0), e(3, 1)]);
    }

    #[test]
    fn right_scalar_elimination() {
        let j = Quaternion::<Q>::unit_j();
        let v2 = &e(2, 0) + &e(2, 1).right_scale(&j);
        let out = gram_schmidt(&[e(2, 0), v2]).unwrap();
        assert!(out[0].inner(&out[1]).unwrap().is_zero());
        assert_eq!(out[1].norm_sq(), Q::from_i64(1));
        assert!(out[1].get(0).is_zero());
    }

    #[test]
    fn dependent_input_is_rejected() {
        let x = QVector::new(vec![Quaternion::<Q>::from_ints(1, 2, 0, 0), Quaternion::from_ints(0, 0, 1, 1)]);
        let xq = x.right_scale(&Quaternion::from_ints(0, 1, 1, 0));
        assert_eq!(gram_schmidt(&[x, xq]), Err(Error::LinearlyDependent));
    }

    #[test]
    fn rank_one_examples() {
        assert_eq!(rank_one(&e(2, 0)), QMatrix::unit(2, 0, 0, &Quaternion::one()));
        let u = &e(2, 0) + &e(2, 1).right_scale(&Quaternion::unit_j());
        let expected = QMatrix::from_rows(vec![
            vec![Quaternion::from_ints(1, 0, 0, 0), Quaternion::from_ints(0, 0, -1, 0)],
            vec![Quaternion::from_ints(0, 0, 1, 0), Quaternion::from_ints(1, 0, 0, 0)],
        ])
        .unwrap();
        assert_eq!(rank_one(&u), expected);
    }

    #[test]
    fn rank_one_matrices_span_herm() {
        use crate::kernelsolver::basis::herm_basis;
        use crate::linsolve;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [2, 3] {
            let basis = herm_basis::<Q>(Ring::Quaternionic, n);
            let rows: Vec<Vec<Q>> = (0..basis.len() + 5)
                .map(|_| basis.coordinates(&rank_one(&random::small_int_vector(&mut rng, n, 2)), 0.0).unwrap())
                .collect();
            assert_eq!(linsolve::rank(&rows, basis.len(), 0.0), basis.len());
        }
    }

    #[test]
    fn canonical_triple_gives_coordinate_isometry() {
        let iso = build_isometry(&e(4, 0), &e(4, 1), &e(4, 2)).unwrap();
        let expected = QMatrix::from_fn(4, 3, |r, c| if r == c { Quaternion::one() } else { Quaternion::zero() });
        assert_eq!(iso.tau, expected);
    }

    #[test]
    fn exact_isometry_and_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in [4, 5] {
            for _ in 0..5 {
                let (x, y, z) = independent_triple(&mut rng, n);
                let iso = build_isometry(&x, &y, &z).unwrap();
                assert!(iso.max_defect().unwrap().is_zero());
                assert_eq!(iso.pi.matmul(&rank_one(&x)).unwrap().matmul(&iso.pi).unwrap(), rank_one(&x));
            }
        }
    }

    #[test]
    fn matrix_elements_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 4;
        let (x, y, z) = independent_triple(&mut rng, n);
        let iso = build_isometry(&x, &y, &z).unwrap();
        let zero = DynamicalMap::<Q>::zero(Ring::Quaternionic, n);
        assert!(compress_map(&zero, &iso).unwrap().is_zero_within(0.0));

        let i = Quaternion::<Q>::unit_i();
        let phi = DynamicalMap::from_fn(Ring::Quaternionic, n, |h| Ok(&h.left_scale(&i) + &h.right_scale(&i))).unwrap();
        assert!(matrix_element_defect(&phi, &iso).unwrap().is_zero());

        let dims = (Ring::Quaternionic.dim_herm(n), Ring::Quaternionic.dim_aherm(n));
        let p: Vec<Q> = (0..dims.0 * dims.1).map(|_| Q::from_i64(rng.gen_range(-2..=2))).collect();
        let random_map = DynamicalMap::from_flat(Ring::Quaternionic, n, &p).unwrap();
        assert!(matrix_element_defect(&random_map, &iso).unwrap().is_zero());
        let phi3 = compress_map(&random_map, &iso).unwrap();
        let h3 = rank_one(&iso.pull_back(&iso.x).unwrap());
        assert_eq!(phi3.evaluate(&h3).unwrap(), compress_apply(&random_map, &iso, &h3).unwrap());
    }
}
