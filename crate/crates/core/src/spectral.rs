//! Spectral calculus for quaternionic matrices, routed through the complex
//! embedding `Λ`.
//!
//! Eigenproblems and exponentials are solved on the `2n x 2n` complex image
//! and mapped back. A complex eigenvector `(x; y)` of `Λ(M)` with eigenvalue
//! `λ` yields the quaternionic right eigenvector `u = x - ȳ j`, i.e.
//! `M u = u λ`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qmatrix::{CMatrix, QMatF, QMatrix, QVecF, QVector};
use crate::quaternion::{QuatF, Quaternion};
use crate::scalar::FLOAT_TOL;

type C64 = Complex<f64>;

/// Ordering applied to the diagonal of [`SpectralDecomposition::d`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenOrdering {
    /// Real part descending, then imaginary part descending; equal
    /// eigenvalues keep the order in which their vectors were orthonormalized.
    RealDescImagDesc,
}

/// `M = U† D U` with `U` unitary and `D` diagonal with entries `a + bi`, `b >= 0`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub u: QMatF,
    pub d: QMatF,
    pub ordering: EigenOrdering,
}

impl SpectralDecomposition {
    /// Diagonal of `D` as complex numbers.
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.d.rows())
            .map(|m| {
                let q = self.d.get(m, m);
                C64::new(q.re, q.i)
            })
            .collect()
    }

    /// `U† D U`.
    pub fn reconstruct(&self) -> QMatF {
        &(&self.u.adjoint() * &self.d) * &self.u
    }

    /// Eigenvectors: the columns of `U†`, with `M u_m = u_m λ_m`.
    pub fn eigenvectors(&self) -> Vec<QVecF> {
        let ut = self.u.adjoint();
        (0..ut.cols()).map(|c| ut.column(c)).collect()
    }
}

/// Skew polar decomposition `A = -X Hp`.
#[derive(Clone, Debug)]
pub struct PolarSkew {
    pub x: QMatF,
    pub hp: QMatF,
}

fn scale_of(m: &QMatF) -> f64 {
    m.max_abs().max(1.0)
}

fn to_c(m: &QMatF) -> Result<DMatrix<C64>> {
    Ok(m.embed()?.to_nalgebra())
}

fn column_norm(v: &DMatrix<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// Irrational weights for the Hermitian pencil `Re + θ Im`; a second weight is
// only tried if the first one merges distinct eigenvalues.
const PENCIL_WEIGHTS: [f64; 4] =
    [0.618_033_988_749_894_9, 0.414_213_562_373_095_1, 0.732_050_807_568_877_2, 0.236_067_977_499_789_7];

/// Orthonormal eigenvectors of a normal complex matrix, with their
/// eigenvalues (Rayleigh quotients).
fn normal_eigen(w: &DMatrix<C64>, scale: f64) -> Result<Vec<(C64, DMatrix<C64>)>> {
    let n = w.nrows();
    let w_adj = w.adjoint();
    let herm = (w + &w_adj).scale(0.5);
    let anti = (w - &w_adj).map(|z| z * C64::new(0.0, -0.5));
    let residual_tol = 1e-9 * scale;
    for theta in PENCIL_WEIGHTS {
        let pencil = &herm + anti.scale(theta);
        let eig = SymmetricEigen::try_new(pencil, 1e-15, 10_000).ok_or(Error::Convergence)?;
        let mut pairs = Vec::with_capacity(n);
        let mut ok = true;
        for c in 0..n {
            let v = DMatrix::from_column_slice(n, 1, eig.eigenvectors.column(c).as_slice());
            let wv = w * &v;
            let mu = (v.adjoint() * &wv)[(0, 0)];
            if column_norm(&(wv - v.map(|z| z * mu))) > residual_tol {
                ok = false;
                break;
            }
            pairs.push((mu, v));
        }
        if ok {
            return Ok(pairs);
        }
    }
    Err(Error::Convergence)
}

/// Quaternionic vector `x - ȳ j` from a complex vector `(x; y)` of length 2n.
fn quaternionic_from_embedded(v: &DMatrix<C64>) -> QVecF {
    let n = v.nrows() / 2;
    QVector::new(
        (0..n)
            .map(|r| {
                let x = v[(r, 0)];
                let y = v[(r + n, 0)];
                Quaternion::from_complex_pair(x, -y.conj())
            })
            .collect(),
    )
}

/// Partner `J(x; y) = (ȳ; -x̄)`; it represents `u j` and is orthogonal to `(x; y)`.
fn partner(v: &DMatrix<C64>) -> DMatrix<C64> {
    let n = v.nrows() / 2;
    DMatrix::from_fn(2 * n, 1, |r, _| if r < n { v[(r + n, 0)].conj() } else { -v[(r - n, 0)].conj() })
}

fn project_out(v: &DMatrix<C64>, basis: &[DMatrix<C64>]) -> DMatrix<C64> {
    let mut w = v.clone();
    for b in basis {
        let coeff = (b.adjoint() * &w)[(0, 0)];
        w -= b.map(|z| z * coeff);
    }
    w
}

/// Fix the free phase of an eigenvector: the largest component becomes real
/// positive (real eigenvalue) or gets a real positive complex part.
fn normalize_phase(u: QVecF, real_eigenvalue: bool) -> QVecF {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (idx, q) in u.entries().iter().enumerate() {
        let m = q.modulus();
        if m > best_mod + 1e-12 {
            best = idx;
            best_mod = m;
        }
    }
    let q = u.get(best).clone();
    if best_mod <= 0.0 {
        return u;
    }
    let c = if real_eigenvalue {
        q.conj().scale(&(1.0 / best_mod))
    } else {
        let (a, b) = q.to_complex_pair();
        if a.norm() > 1e-12 * best_mod {
            Quaternion::from_complex(a.conj() / a.norm())
        } else {
            Quaternion::from_complex(b / b.norm())
        }
    };
    u.right_scale(&c)
}

fn round_to(x: f64, step: f64) -> f64 {
    (x / step).round() * step
}

/// Unitary diagonalization `M = U† D U` of a normal quaternionic matrix.
///
/// `tol` bounds `‖M†M - MM†‖` relative to the squared entry scale of `M`.
/// The zero matrix decomposes as `U = 𝟙`, `D = 0`.
pub fn eig_normal(m: &QMatF, tol: f64) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let scale = scale_of(m);
    if !m.is_normal(tol * scale * scale) {
        return Err(Error::NotNormal);
    }
    if m.is_zero_within(0.0) {
        return Ok(SpectralDecomposition {
            u: QMatrix::identity(n),
            d: QMatrix::zeros(n, n),
            ordering: EigenOrdering::RealDescImagDesc,
        });
    }
    let lam = to_c(m)?;
    let mut pairs = normal_eigen(&lam, scale)?;
    let group_tol = 1e-8 * scale;
    // stable: equal keys keep the eigensolver's index order
    pairs.sort_by(|(a, _), (b, _)| {
        let ka = (round_to(a.re, group_tol), round_to(a.im, group_tol));
        let kb = (round_to(b.re, group_tol), round_to(b.im, group_tol));
        kb.0.total_cmp(&ka.0).then(kb.1.total_cmp(&ka.1))
    });

    let mut accepted: Vec<DMatrix<C64>> = Vec::with_capacity(2 * n);
    let mut columns: Vec<(C64, QVecF)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < pairs.len() {
        let lead = pairs[start].0;
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end].0 - lead).norm() <= group_tol {
            end += 1;
        }
        let real = lead.im.abs() <= group_tol;
        // the conjugate half of the spectrum is covered by the partners
        if lead.im >= -group_tol {
            let mut remaining: Vec<usize> = (start..end).collect();
            loop {
                // largest residual first, so a 2d-dimensional real eigenspace
                // always yields d quaternionic vectors
                let mut pick: Option<(usize, f64, DMatrix<C64>)> = None;
                for (slot, &idx) in remaining.iter().enumerate() {
                    let w = project_out(&pairs[idx].1, &accepted);
                    let norm = column_norm(&w);
                    if pick.as_ref().is_none_or(|(_, best, _)| norm > *best + 1e-12) {
                        pick = Some((slot, norm, w));
                    }
                }
                let Some((slot, norm, w)) = pick else { break };
                if norm <= 1e-6 {
                    break;
                }
                remaining.remove(slot);
                let w = w.map(|z| z / norm);
                let rq = (w.adjoint() * (&lam * &w))[(0, 0)];
                let lambda = if real { C64::new(rq.re, 0.0) } else { C64::new(rq.re, rq.im.max(0.0)) };
                let u = normalize_phase(quaternionic_from_embedded(&w), real);
                accepted.push(partner(&w));
                accepted.push(w);
                columns.push((lambda, u));
            }
        }
        start = end;
    }
    if columns.len() != n {
        return Err(Error::Convergence);
    }
    let vectors: Vec<QVecF> = columns.iter().map(|(_, u)| u.clone()).collect();
    let ut = QMatrix::from_columns(&vectors)?;
    let diagonal: Vec<QuatF> = columns.iter().map(|(l, _)| Quaternion::new(l.re, l.im, 0.0, 0.0)).collect();
    Ok(SpectralDecomposition {
        u: ut.adjoint(),
        d: QMatrix::diag(&diagonal),
        ordering: EigenOrdering::RealDescImagDesc,
    })
}

/// `e^{At}`, computed as `Λ⁻¹(exp(Λ(A) t))` with Padé scaling-and-squaring.
pub fn exp_skew(a: &QMatF, t: f64) -> Result<QMatF> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let lam = to_c(a)? * C64::new(t, 0.0);
    let e = CMatrix::from_nalgebra(&lam.exp());
    let image_tol = 1e-9 * e.as_qmatrix().max_abs().max(1.0);
    if !e.in_image_of_embed(image_tol) {
        return Err(Error::NotInEmbeddingImage);
    }
    QMatrix::unembed(&e)
}

/// `A = -X Hp` for skew-adjoint `A`: `X` unitary and skew-adjoint, `Hp`
/// positive semidefinite, `[X, Hp] = 0`. Zero eigenvalues get `X = -i` on
/// their eigenspace.
pub fn polar_skew(a: &QMatF, tol: f64) -> Result<PolarSkew> {
    if !a.is_skew(tol * scale_of(a)) {
        return Err(Error::NotSkew);
    }
    let dec = eig_normal(a, tol)?;
    let n = a.rows();
    let magnitudes: Vec<QuatF> = (0..n).map(|m| Quaternion::real(dec.d.get(m, m).i)).collect();
    let u_adj = dec.u.adjoint();
    let hp = &(&u_adj * &QMatrix::diag(&magnitudes)) * &dec.u;
    let minus_i = QMatrix::scalar(n, &Quaternion::new(0.0, -1.0, 0.0, 0.0));
    let x = &(&u_adj * &minus_i) * &dec.u;
    Ok(PolarSkew { x, hp })
}

/// Decomposition of `H / ‖H‖_F` with `D` rescaled by `‖H‖_F`, so that `U`
/// depends only on the ray `{rH : r > 0}`. `H = 0` gives `U = 𝟙`, `D = 0`.
pub fn canonical_spectral(h: &QMatF) -> Result<SpectralDecomposition> {
    if !h.is_hermitian(FLOAT_TOL * scale_of(h)) {
        return Err(Error::NotHermitian);
    }
    let n = h.rows();
    let norm = h.frobenius_norm_sq().sqrt();
    if norm == 0.0 {
        return Ok(SpectralDecomposition {
            u: QMatrix::identity(n),
            d: QMatrix::zeros(n, n),
            ordering: EigenOrdering::RealDescImagDesc,
        });
    }
    let mut dec = eig_normal(&h.scale_real(&(1.0 / norm)), FLOAT_TOL)?;
    dec.d = dec.d.scale_real(&norm);
    Ok(dec)
}

/// Spectral resolution `H = Σ h_k Π_k` with distinct eigenvalues `h_k`
/// (descending) and self-adjoint projections `Π_k` summing to `𝟙`.
pub fn spectral_projections(h: &QMatF) -> Result<Vec<(f64, QMatF)>> {
    if !h.is_hermitian(FLOAT_TOL * scale_of(h)) {
        return Err(Error::NotHermitian);
    }
    let dec = eig_normal(h, FLOAT_TOL)?;
    let group_tol = 1e-8 * scale_of(h);
    let mut out: Vec<(f64, QMatF)> = Vec::new();
    for (value, u) in dec.eigenvalues().iter().zip(dec.eigenvectors()) {
        let col = u.to_column();
        let proj = &col * &col.adjoint();
        match out.last_mut() {
            Some((h_k, pi)) if (*h_k - value.re).abs() <= group_tol => *pi = &*pi + &proj,
            _ => out.push((value.re, proj)),
        }
    }
    Ok(out)
}
