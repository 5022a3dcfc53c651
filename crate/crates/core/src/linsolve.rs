//! Dense Gaussian elimination over a [`Scalar`] field.
//!
//! With [`Rational`](crate::Rational) entries every step is exact and the
//! tolerance is ignored.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduced row echelon form of `rows` (each of length `cols`), together with
/// the pivot column of every nonzero row.
pub fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, cols: usize, tol: f64) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // partial pivoting: largest magnitude, first index on ties
        let mut best: Option<(usize, S)> = None;
        for (idx, row) in rows.iter().enumerate().skip(r) {
            if row[c].within(tol) {
                continue;
            }
            let mag = row[c].abs();
            if best.as_ref().is_none_or(|(_, m)| mag > *m) {
                best = Some((idx, mag));
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].checked_recip().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (idx, row) in rows.iter_mut().enumerate() {
            if idx == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize, tol: f64) -> usize {
    rref(rows.to_vec(), cols, tol).1.len()
}

/// Solve `A x = b` for `A` given as rows of length `unknowns`. Free variables
/// are set to zero, so the returned solution is canonical.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], unknowns: usize, tol: f64) -> Result<Vec<S>> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} right-hand sides", a.len()),
            found: b.len().to_string(),
        });
    }
    let augmented: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(augmented, unknowns + 1, tol);
    if pivots.last() == Some(&unknowns) {
        return Err(Error::InconsistentSystem("right-hand side is not in the column span".into()));
    }
    let mut x = vec![S::zero(); unknowns];
    for (row, &c) in reduced.iter().zip(&pivots) {
        x[c] = row[unknowns].clone();
    }
    Ok(x)
}

/// Basis of `{x : A x = 0}`, one vector per free column (ascending).
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], cols: usize, tol: f64) -> Vec<Vec<S>> {
    let (reduced, pivots) = rref(rows.to_vec(), cols, tol);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (row, &c) in reduced.iter().zip(&pivots) {
                v[c] = -row[f].clone();
            }
            v
        })
        .collect()
}
