//! Classification of commuting ℝ-linear correspondences by exact nullspace
//! computation.
//!
//! A map `Φ` with coefficients `P` is commuting iff
//! `𝒬_Φ(t_i, t_j) = [Φ(t_i), t_j] + [Φ(t_j), t_i]` vanishes for every pair of
//! basis elements, which is the linear system `𝒳 · vec(P) = 0`.

pub mod basis;
pub mod fit;
pub mod sparse;
pub mod structure;

use std::time::Instant;

use serde_json::{json, Value};

pub use basis::{aherm_basis, herm_basis, BasisSet, Ring, Space};
pub use fit::{fit_complex_generator, fit_quat_generator, ComplexFit, QuatFit};
pub use sparse::Elimination;
pub use structure::{ColIndex, RowIndex, StructureConstants, XMatrix};

use crate::correspondence::{ComplexGenSpec, DynamicalMap, QuatGenSpec};
use crate::error::{Error, Result};
use crate::json::{complex_spec_to_json, quat_spec_to_json, JsonScalar};
use crate::scalar::{format_rational, Rational, Scalar};

pub fn structure_constants(ring: Ring, n: usize) -> Result<StructureConstants> {
    StructureConstants::compute(ring, n)
}

pub fn assemble_x(ring: Ring, n: usize) -> Result<XMatrix> {
    let sc = StructureConstants::compute(ring, n)?;
    let x = XMatrix::assemble(&sc);
    if !x.verify_symmetry(&sc) {
        return Err(Error::Internal("rows (i,j,k) and (j,i,k) of X differ".into()));
    }
    Ok(x)
}

/// Exact nullspace basis of `𝒳`, as flat coefficient vectors `vec(P)`.
pub fn kernel(x: &XMatrix) -> Vec<Vec<Rational>> {
    sparse::kernel(x.rows(), x.num_cols()).kernel
}

/// Map with coefficients `p`, checked to satisfy `𝒬_Φ = 0` on every basis pair.
pub fn kernel_to_map(p: &[Rational], ring: Ring, n: usize) -> Result<DynamicalMap<Rational>> {
    let map = DynamicalMap::from_flat(ring, n, p)?;
    let defect = map.max_basis_defect();
    if !defect.is_zero() {
        return Err(Error::NonzeroDefect(format!("max |Q(t_i, t_j)| = {}", format_rational(&defect))));
    }
    Ok(map)
}

/// Closed-form parameters of a kernel element.
#[derive(Clone, Debug, PartialEq)]
pub enum Fit {
    Quat(QuatGenSpec<Rational>),
    Complex(ComplexGenSpec<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub map: DynamicalMap<Rational>,
    pub fit: Option<Fit>,
    pub residual: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub ring: Ring,
    pub n: usize,
    pub dim_herm: usize,
    pub dim_aherm: usize,
    pub x_rows: usize,
    pub x_cols: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub elements: Vec<KernelElement>,
    pub elapsed_ms: u128,
}

impl KernelReport {
    /// Largest fit residual over all elements.
    pub fn max_residual(&self) -> Rational {
        self.elements
            .iter()
            .map(|e| e.residual.clone())
            .fold(<Rational as Scalar>::zero(), |a, b| if b > a { b } else { a })
    }

    /// JSON report. `elapsed_ms` is the only field that varies between runs.
    pub fn to_json(&self, seed: u64) -> Value {
        let basis: Vec<Value> = self
            .elements
            .iter()
            .map(|e| {
                let fit = match &e.fit {
                    Some(Fit::Quat(spec)) => quat_spec_to_json(spec),
                    Some(Fit::Complex(spec)) => complex_spec_to_json(spec),
                    None => Value::Null,
                };
                json!({
                    "P": e.map.flat_coefficients().iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
                    "fit": fit,
                    "residual": format_rational(&e.residual),
                })
            })
            .collect();
        json!({
            "ring": self.ring.name(),
            "n": self.n,
            "dim_herm": self.dim_herm,
            "dim_aherm": self.dim_aherm,
            "x_rows": self.x_rows,
            "x_cols": self.x_cols,
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            "basis": basis,
            "max_residual": format_rational(&self.max_residual()),
            "version": crate::VERSION,
            "mode": "exact",
            "seed": seed,
            "elapsed_ms": self.elapsed_ms as u64,
        })
    }
}

/// Fit a kernel element to its closed form where one is available
/// (`n <= 2` over ℍ, any `n` over ℂ).
fn fit_element(map: &DynamicalMap<Rational>) -> Result<(Option<Fit>, Rational)> {
    match map.ring() {
        Ring::Quaternionic if map.n() <= 2 => {
            let f = fit_quat_generator(map)?;
            Ok((Some(Fit::Quat(f.spec)), f.residual))
        }
        Ring::Quaternionic => Ok((None, <Rational as Scalar>::zero())),
        Ring::Complex => {
            let f = fit_complex_generator(map)?;
            Ok((Some(Fit::Complex(f.spec)), f.residual))
        }
    }
}

/// Full pipeline: bases, structure constants, `𝒳`, exact kernel, defect
/// recheck and closed-form fits.
pub fn classify(ring: Ring, n: usize) -> Result<KernelReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let start = Instant::now();
    let x = assemble_x(ring, n)?;
    let elim = sparse::kernel(x.rows(), x.num_cols());
    let elements = elim
        .kernel
        .iter()
        .map(|p| {
            let map = kernel_to_map(p, ring, n)?;
            let (fit, residual) = fit_element(&map)?;
            if !residual.is_zero() {
                return Err(Error::Internal(format!("kernel element fit residual {}", format_rational(&residual))));
            }
            Ok(KernelElement { map, fit, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelReport {
        ring,
        n,
        dim_herm: ring.dim_herm(n),
        dim_aherm: ring.dim_aherm(n),
        x_rows: x.num_rows(),
        x_cols: x.num_cols(),
        rank: elim.rank,
        kernel_dim: elements.len(),
        elements,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
