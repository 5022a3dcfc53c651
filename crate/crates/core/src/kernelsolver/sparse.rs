//! Exact sparse nullspace by incremental row echelon reduction.
//!
//! Columns are ordered by ascending occupancy and rows by ascending length.
//! Each incoming row is reduced against the stored pivot rows until its
//! leading entry falls in a column without a pivot, which it then claims.
//! Elimination stops as soon as every column carries a pivot.

use super::structure::Entry;
use crate::linsolve;
use crate::scalar::{Rational, Scalar};

/// Outcome of the elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub rank: usize,
    /// Rows consumed before the echelon form was complete.
    pub rows_used: usize,
    /// Nullspace basis in reduced row echelon form (original column order).
    pub kernel: Vec<Vec<Rational>>,
}

type SparseRow = Vec<(u32, Rational)>;

fn zero() -> Rational {
    <Rational as Scalar>::zero()
}

/// Nullspace of the sparse matrix with the given rows and `cols` columns.
pub fn kernel(rows: &[Vec<Entry>], cols: usize) -> Elimination {
    let mut count = vec![0usize; cols];
    for row in rows {
        for (c, _) in row {
            count[*c] += 1;
        }
    }
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by_key(|&c| (count[c], c));
    let mut position = vec![0u32; cols];
    for (pos, &c) in order.iter().enumerate() {
        position[c] = pos as u32;
    }

    let mut row_order: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    row_order.sort_by_key(|&r| (rows[r].len(), r));

    let mut pivots: Vec<Option<SparseRow>> = vec![None; cols];
    let mut rank = 0;
    let mut rows_used = 0;
    let mut acc: Vec<Rational> = vec![zero(); cols];
    for &r in &row_order {
        if rank == cols {
            break;
        }
        rows_used += 1;
        let mut start = cols;
        for (c, v) in &rows[r] {
            let p = position[*c] as usize;
            acc[p] = v.clone();
            start = start.min(p);
        }
        for p in start..cols {
            if acc[p].is_zero() {
                continue;
            }
            match &pivots[p] {
                Some(pivot_row) => {
                    let f = std::mem::replace(&mut acc[p], zero());
                    for (pc, pv) in &pivot_row[1..] {
                        let slot = &mut acc[*pc as usize];
                        *slot = &*slot - &(&f * pv);
                    }
                }
                None => {
                    let inv = Scalar::checked_recip(&acc[p]).expect("nonzero leading entry");
                    let mut new_row: SparseRow = Vec::new();
                    for (q, slot) in acc.iter_mut().enumerate().skip(p) {
                        if !slot.is_zero() {
                            let v = std::mem::replace(slot, zero());
                            new_row.push((q as u32, v * &inv));
                        }
                    }
                    pivots[p] = Some(new_row);
                    rank += 1;
                    break;
                }
            }
        }
    }

    // Back substitution for each free column, in permuted coordinates.
    let free: Vec<usize> = (0..cols).filter(|&p| pivots[p].is_none()).collect();
    let mut kernel_vectors: Vec<Vec<Rational>> = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![zero(); cols];
        x[f] = Rational::from_i64(1);
        for p in (0..cols).rev() {
            if let Some(pivot_row) = &pivots[p] {
                let mut s = zero();
                for (c, v) in &pivot_row[1..] {
                    let xc = &x[*c as usize];
                    if !xc.is_zero() {
                        s += v * xc;
                    }
                }
                x[p] = -s;
            }
        }
        let mut out = vec![zero(); cols];
        for (pos, &c) in order.iter().enumerate() {
            out[c] = std::mem::replace(&mut x[pos], zero());
        }
        kernel_vectors.push(out);
    }

    let kernel = if kernel_vectors.is_empty() { kernel_vectors } else { linsolve::rref(kernel_vectors, cols, 0.0).0 };
    Elimination { rank, rows_used, kernel }
}
