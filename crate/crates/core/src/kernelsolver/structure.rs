//! Structure constants `[s_a, t_i] = Σ_k C_{a,i}^k t_k` and the sparse matrix `𝒳`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::basis::{aherm_basis, herm_basis, BasisSet, Ring};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Sparse entry `(index, value)`.
pub type Entry = (usize, Rational);

/// Exact structure constants, stored sparsely as `c[a][i] = [(k, C_{a,i}^k)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub ring: Ring,
    pub n: usize,
    pub dim_herm: usize,
    pub dim_aherm: usize,
    c: Vec<Vec<Vec<Entry>>>,
}

fn map_indices<T: Send, F: Fn(usize) -> T + Sync + Send>(len: usize, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

impl StructureConstants {
    /// `C_{a,i}^k = <t_k, [s_a, t_i]>_F / <t_k, t_k>_F`, each commutator
    /// checked to be reconstructed exactly.
    pub fn compute(ring: Ring, n: usize) -> Result<Self> {
        let herm: BasisSet<Rational> = herm_basis(ring, n);
        let aherm: BasisSet<Rational> = aherm_basis(ring, n);
        let c = map_indices(aherm.len(), |a| {
            let s = aherm.get(a);
            herm.elements()
                .iter()
                .map(|t| {
                    let bracket = s.commutator(t)?;
                    let coords = herm.coordinates(&bracket, 0.0).map_err(|e| {
                        Error::Internal(format!(
                            "commutator [s_{a}, t] not reconstructed from the Hermitian basis: {e}"
                        ))
                    })?;
                    Ok(coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
                })
                .collect::<Result<Vec<Vec<Entry>>>>()
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(StructureConstants { ring, n, dim_herm: herm.len(), dim_aherm: aherm.len(), c })
    }

    /// Nonzero `(k, C_{a,i}^k)`.
    pub fn entries(&self, a: usize, i: usize) -> &[Entry] {
        &self.c[a][i]
    }

    pub fn get(&self, a: usize, i: usize, k: usize) -> Rational {
        self.c[a][i].iter().find(|(kk, _)| *kk == k).map(|(_, v)| v.clone()).unwrap_or_else(<Rational as Scalar>::zero)
    }

    /// `true` if every constant lies in `½ℤ`.
    pub fn half_integral(&self) -> bool {
        let two = Rational::from_i64(2);
        self.c.iter().flatten().flatten().all(|(_, v)| (v * &two).is_integer())
    }
}

/// Row index `(i, j, k)` with `i <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Column index `(ℓ, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColIndex {
    pub l: usize,
    pub a: usize,
}

/// `𝒳_{(i,j,k),(ℓ,a)} = C_{a,j}^k δ_{iℓ} + C_{a,i}^k δ_{jℓ}` restricted to `i <= j`,
/// stored as sparse rows sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct XMatrix {
    pub ring: Ring,
    pub n: usize,
    dim_herm: usize,
    dim_aherm: usize,
    rows: Vec<Vec<Entry>>,
}

/// `by_ik[i][k] = [(a, C_{a,i}^k)]`.
fn transpose_constants(sc: &StructureConstants) -> Vec<Vec<Vec<Entry>>> {
    let mut by_ik = vec![vec![Vec::new(); sc.dim_herm]; sc.dim_herm];
    for a in 0..sc.dim_aherm {
        for (i, row) in by_ik.iter_mut().enumerate() {
            for (k, v) in sc.entries(a, i) {
                row[*k].push((a, v.clone()));
            }
        }
    }
    by_ik
}

fn formula_row(by_ik: &[Vec<Vec<Entry>>], dim_aherm: usize, i: usize, j: usize, k: usize) -> Vec<Entry> {
    let mut row: Vec<Entry> = Vec::new();
    for (a, v) in &by_ik[j][k] {
        row.push((i * dim_aherm + a, v.clone()));
    }
    for (a, v) in &by_ik[i][k] {
        row.push((j * dim_aherm + a, v.clone()));
    }
    row.sort_by_key(|(c, _)| *c);
    let mut merged: Vec<Entry> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = &*lv + &v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    merged
}

impl XMatrix {
    pub fn assemble(sc: &StructureConstants) -> Self {
        let by_ik = transpose_constants(sc);
        let dh = sc.dim_herm;
        let blocks = map_indices(dh, |i| {
            let mut block = Vec::with_capacity((dh - i) * dh);
            for j in i..dh {
                for k in 0..dh {
                    block.push(formula_row(&by_ik, sc.dim_aherm, i, j, k));
                }
            }
            block
        });
        XMatrix {
            ring: sc.ring,
            n: sc.n,
            dim_herm: dh,
            dim_aherm: sc.dim_aherm,
            rows: blocks.into_iter().flatten().collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.dim_herm * self.dim_aherm
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[Entry] {
        &self.rows[r]
    }

    pub fn row_index(&self, r: usize) -> RowIndex {
        let dh = self.dim_herm;
        let k = r % dh;
        let mut pair = r / dh;
        let mut i = 0;
        while pair >= dh - i {
            pair -= dh - i;
            i += 1;
        }
        RowIndex { i, j: i + pair, k }
    }

    pub fn row_flat(&self, idx: RowIndex) -> usize {
        let dh = self.dim_herm;
        let (i, j) = if idx.i <= idx.j { (idx.i, idx.j) } else { (idx.j, idx.i) };
        let before: usize = (0..i).map(|p| dh - p).sum();
        (before + (j - i)) * dh + idx.k
    }

    pub fn col_index(&self, c: usize) -> ColIndex {
        ColIndex { l: c / self.dim_aherm, a: c % self.dim_aherm }
    }

    pub fn col_flat(&self, idx: ColIndex) -> usize {
        idx.l * self.dim_aherm + idx.a
    }

    /// Recompute the dropped rows `(j, i, k)`, `j > i`, from the formula and
    /// check that they equal the stored rows `(i, j, k)`.
    pub fn verify_symmetry(&self, sc: &StructureConstants) -> bool {
        let by_ik = transpose_constants(sc);
        let dh = self.dim_herm;
        (0..dh).all(|i| {
            (i..dh).all(|j| {
                (0..dh).all(|k| {
                    let stored = &self.rows[self.row_flat(RowIndex { i, j, k })];
                    formula_row(&by_ik, self.dim_aherm, j, i, k) == *stored
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::QMatrix;
    use crate::quaternion::Quaternion;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_case_vanishes() {
        let sc = StructureConstants::compute(Ring::Quaternionic, 1).unwrap();
        assert!((0..3).all(|a| sc.entries(a, 0).is_empty()));
        let x = XMatrix::assemble(&sc);
        assert_eq!((x.num_rows(), x.num_cols(), x.nnz()), (1, 3, 0));
    }

    #[test]
    fn two_level_commutator_coefficient() {
        let sc = StructureConstants::compute(Ring::Quaternionic, 2).unwrap();
        let aherm = aherm_basis::<Rational>(Ring::Quaternionic, 2);
        let herm = herm_basis::<Rational>(Ring::Quaternionic, 2);
        let i_unit = Quaternion::<Rational>::unit_i();
        let s = aherm.elements().iter().position(|m| *m == QMatrix::unit(2, 0, 0, &i_unit)).unwrap();
        let mut t = QMatrix::unit(2, 0, 1, &Quaternion::one());
        t.set(1, 0, Quaternion::one());
        let t = herm.elements().iter().position(|m| *m == t).unwrap();
        let mut target = QMatrix::unit(2, 0, 1, &i_unit);
        target.set(1, 0, i_unit.conj());
        let k = herm.elements().iter().position(|m| *m == target).unwrap();
        assert_eq!(sc.get(s, t, k), Rational::from_i64(1));
        assert_eq!(sc.entries(s, t).len(), 1);
        assert!(sc.half_integral());
    }

    #[test]
    fn bilinear_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ring in [Ring::Quaternionic, Ring::Complex] {
            let sc = StructureConstants::compute(ring, 3).unwrap();
            let herm = herm_basis::<Rational>(ring, 3);
            let aherm = aherm_basis::<Rational>(ring, 3);
            let x: Vec<Rational> = (0..aherm.len()).map(|_| random::scalar(&mut rng)).collect();
            let y: Vec<Rational> = (0..herm.len()).map(|_| random::scalar(&mut rng)).collect();
            let direct = aherm.combine(&x).commutator(&herm.combine(&y)).unwrap();
            let mut coeffs = vec![<Rational as Scalar>::zero(); herm.len()];
            for (a, xa) in x.iter().enumerate() {
                for (i, yi) in y.iter().enumerate() {
                    for (k, c) in sc.entries(a, i) {
                        coeffs[*k] = &coeffs[*k] + &(xa * yi * c);
                    }
                }
            }
            assert_eq!(herm.combine(&coeffs), direct);
        }
    }

    #[test]
    fn shapes_and_index_maps() {
        let sc = StructureConstants::compute(Ring::Quaternionic, 3).unwrap();
        let x = XMatrix::assemble(&sc);
        assert_eq!(x.num_cols(), 15 * 21);
        assert_eq!(x.num_rows(), (15 * 14 / 2 + 15) * 15);
        for r in (0..x.num_rows()).step_by(37) {
            assert_eq!(x.row_flat(x.row_index(r)), r);
        }
        for c in 0..x.num_cols() {
            assert_eq!(x.col_flat(x.col_index(c)), c);
        }
        assert!(x.verify_symmetry(&sc));
    }
}
