//! Fitting maps to the closed forms `AH + HA - tr(H)A` (over ℍ) and
//! `iλH + i tr(BH) 𝟙` (over ℂ).

use super::basis::{herm_basis, Ring};
use crate::correspondence::{phi_complex, phi_quat, ComplexGenSpec, DynamicalMap, QuatGenSpec};
use crate::error::{Error, Result};
use crate::linsolve;
use crate::qmatrix::QMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct QuatFit<S> {
    pub spec: QuatGenSpec<S>,
    /// `max_ℓ ‖Φ(t_ℓ) - (A t_ℓ + t_ℓ A - tr(t_ℓ) A)‖_max`.
    pub residual: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFit<S> {
    pub spec: ComplexGenSpec<S>,
    /// `max_ℓ ‖Φ(t_ℓ) - (iλ t_ℓ + i tr(B t_ℓ) 𝟙)‖_max`.
    pub residual: S,
}

/// Solve `Σ_b x_b P(column_b) = P(map)` and return the coefficients.
fn solve_in_span<S: Scalar>(map: &DynamicalMap<S>, columns: &[DynamicalMap<S>]) -> Result<Vec<S>> {
    let flats: Vec<Vec<S>> = columns.iter().map(DynamicalMap::flat_coefficients).collect();
    let target = map.flat_coefficients();
    let rows: Vec<Vec<S>> = (0..target.len()).map(|r| flats.iter().map(|f| f[r].clone()).collect()).collect();
    let tol = if S::EXACT { 0.0 } else { S::default_tol() * 1e2 };
    linsolve::solve(&rows, &target, columns.len(), tol).map_err(|e| match e {
        Error::InconsistentSystem(_) => {
            Error::InconsistentSystem(format!("map is not of the {} closed form", map.ring()))
        }
        other => other,
    })
}

fn max_residual<S: Scalar>(map: &DynamicalMap<S>, model: impl Fn(&QMatrix<S>) -> Result<QMatrix<S>>) -> Result<S> {
    let mut worst = S::zero();
    for (l, t) in map.herm_basis().elements().iter().enumerate() {
        let diff = map.image_of_basis(l).try_sub(&model(t)?)?;
        let m = diff.max_abs();
        if m > worst {
            worst = m;
        }
    }
    Ok(worst)
}

/// Recover `A` with `Φ(H) = AH + HA - tr(H)A` for `n ∈ {1, 2}`.
pub fn fit_quat_generator<S: Scalar>(map: &DynamicalMap<S>) -> Result<QuatFit<S>> {
    let n = map.n();
    if map.ring() != Ring::Quaternionic {
        return Err(Error::RingMismatch("quaternionic fit needs a quaternionic map".into()));
    }
    if !(1..=2).contains(&n) {
        return Err(Error::Precondition(format!("quaternionic fit is defined for n <= 2, got {n}")));
    }
    let aherm = map.aherm_basis().clone();
    let columns = aherm
        .elements()
        .iter()
        .map(|s| DynamicalMap::from_quat_spec(&QuatGenSpec::with_unit_hbar(s.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let alpha = solve_in_span(map, &columns)?;
    let spec = QuatGenSpec::with_unit_hbar(aherm.combine(&alpha))?;
    let residual = max_residual(map, |h| phi_quat(&spec, h))?;
    Ok(QuatFit { spec, residual })
}

/// Recover `(λ, B)` with `Φ(H) = iλH + i tr(BH) 𝟙`. For `n = 1` the two terms
/// coincide and the fit reports `B = 0`.
pub fn fit_complex_generator<S: Scalar>(map: &DynamicalMap<S>) -> Result<ComplexFit<S>> {
    let n = map.n();
    if map.ring() != Ring::Complex {
        return Err(Error::RingMismatch("complex fit needs a complex map".into()));
    }
    let herm = herm_basis::<S>(Ring::Complex, n);
    let mut columns = vec![DynamicalMap::from_complex_spec(&ComplexGenSpec::new(S::one(), QMatrix::zeros(n, n))?)?];
    for t in herm.elements() {
        columns.push(DynamicalMap::from_complex_spec(&ComplexGenSpec::new(S::zero(), t.clone())?)?);
    }
    let x = solve_in_span(map, &columns)?;
    let spec = ComplexGenSpec::new(x[0].clone(), herm.combine(&x[1..]))?;
    let residual = max_residual(map, |h| phi_complex(&spec, h))?;
    Ok(ComplexFit { spec, residual })
}
