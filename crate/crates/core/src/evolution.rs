//! One-parameter unitary groups `U_t = e^{At}`, trajectories, generator
//! recovery and the nonlinear isometry `R[M]`.

use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::correspondence::{phi_complex, phi_quat};
use crate::error::{Error, Result};
use crate::json::{vector_to_json, GeneratorSpec};
use crate::qmatrix::{QMatF, QVecF, QVector};
use crate::scalar::FLOAT_TOL;
use crate::spectral::{exp_skew, spectral_projections};

/// `t ↦ U_t = e^{A t / ℏ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGroup {
    pub a: QMatF,
    pub hbar: f64,
}

impl UnitaryGroup {
    pub fn new(a: QMatF, hbar: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if !a.is_skew(FLOAT_TOL * a.max_abs().max(1.0)) {
            return Err(Error::NotSkew);
        }
        if hbar.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Precondition("hbar must be positive".into()));
        }
        Ok(UnitaryGroup { a, hbar })
    }

    pub fn at(&self, t: f64) -> Result<QMatF> {
        exp_skew(&self.a, t / self.hbar)
    }

    /// `‖U_{s+t} - U_s U_t‖_max`.
    pub fn group_law_defect(&self, s: f64, t: f64) -> Result<f64> {
        let lhs = self.at(s + t)?;
        let rhs = &self.at(s)? * &self.at(t)?;
        Ok((&lhs - &rhs).max_abs())
    }
}

/// Generator `A` of the time evolution for Hamiltonian `h`: `Φ(H)/ℏ` for a
/// quaternionic spec (only `n <= 2` admits commuting correspondences) and
/// `Φ(H)` for a complex spec.
pub fn generator_from_spec(spec: &GeneratorSpec<f64>, h: &QMatF) -> Result<QMatF> {
    match spec {
        GeneratorSpec::Quat(s) => {
            if s.n() > 2 {
                return Err(Error::NoDynamics(s.n()));
            }
            Ok(phi_quat(s, h)?.scale_real(&(1.0 / s.hbar)))
        }
        GeneratorSpec::Complex(s) => phi_complex(s, h),
    }
}

/// Time points `t0 + m dt` for `m = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    /// Grid from `0` to `t_max` with spacing `dt` (the last step is rounded).
    pub fn up_to(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::Precondition(format!("invalid time grid t_max = {t_max}, dt = {dt}")));
        }
        Ok(TimeGrid { t0: 0.0, dt, steps: (t_max / dt).round() as usize })
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|m| self.t0 + m as f64 * self.dt).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<QVecF>,
    /// `<ψ(t_m), H ψ(t_m)>` when an observable was supplied.
    pub expectations: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    /// `max_m |‖ψ(t_m)‖ - ‖ψ(t_0)‖|`.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.states[0].norm();
        self.states.iter().map(|s| (s.norm() - n0).abs()).fold(0.0, f64::max)
    }

    /// Header `t,re(psi_1),i(psi_1),j(psi_1),k(psi_1),...[,expect_H]`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, QVector::len);
        let mut out = String::from("t");
        for p in 1..=n {
            for part in ["re", "i", "j", "k"] {
                let _ = write!(out, ",{part}(psi_{p})");
            }
        }
        if self.expectations.is_some() {
            out.push_str(",expect_H");
        }
        out.push('\n');
        for (m, (t, state)) in self.times().iter().zip(&self.states).enumerate() {
            let _ = write!(out, "{t}");
            for q in state.entries() {
                for v in q.to_array() {
                    let _ = write!(out, ",{v}");
                }
            }
            if let Some(e) = &self.expectations {
                let _ = write!(out, ",{}", e[m]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .times()
            .iter()
            .zip(&self.states)
            .enumerate()
            .map(|(m, (t, s))| {
                let mut p = json!({"t": t, "psi": vector_to_json(s)});
                if let Some(e) = &self.expectations {
                    p["expect_H"] = json!(e[m]);
                }
                p
            })
            .collect();
        json!({"t0": self.grid.t0, "dt": self.grid.dt, "steps": self.grid.steps, "points": points})
    }
}

fn map_times<T: Send>(times: &[f64], f: impl Fn(f64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        times.par_iter().map(|&t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        times.iter().map(|&t| f(t)).collect()
    }
}

/// `<x, H x>` as a real number; fails if the imaginary parts are not negligible.
pub fn expectation(h: &QMatF, x: &QVecF) -> Result<f64> {
    let v = x.inner(&h.apply(x)?)?;
    let scale = h.max_abs().max(1.0) * x.norm_sq().max(1.0);
    if v.i.abs().max(v.j.abs()).max(v.k.abs()) > 1e-9 * scale {
        return Err(Error::NotHermitian);
    }
    Ok(v.re)
}

/// `ψ(t_m) = e^{A (t_m - t_0)} ψ_0`, with optional expectation series of `observable`.
pub fn evolve(a: &QMatF, psi0: &QVecF, grid: TimeGrid, observable: Option<&QMatF>) -> Result<Trajectory> {
    let group = UnitaryGroup::new(a.clone(), 1.0)?;
    if psi0.len() != a.rows() {
        return Err(Error::ShapeMismatch {
            expected: format!("state of length {}", a.rows()),
            found: psi0.len().to_string(),
        });
    }
    if psi0.norm() == 0.0 {
        return Err(Error::Precondition("initial state must be nonzero".into()));
    }
    if let Some(h) = observable {
        if h.rows() != a.rows() || !h.is_hermitian(FLOAT_TOL * h.max_abs().max(1.0)) {
            return Err(Error::NotHermitian);
        }
    }
    let times = grid.times();
    let states = map_times(&times, |t| group.at(t - grid.t0)?.apply(psi0))?;
    let expectations =
        observable.map(|h| states.iter().map(|s| expectation(h, s)).collect::<Result<Vec<_>>>()).transpose()?;
    Ok(Trajectory { grid, states, expectations })
}

/// `max_t ‖U_t† H U_t - H‖_F` with `U_t = e^{At}`.
pub fn conserve_check(h: &QMatF, a: &QMatF, times: &[f64]) -> Result<f64> {
    let group = UnitaryGroup::new(a.clone(), 1.0)?;
    if !h.is_hermitian(FLOAT_TOL * h.max_abs().max(1.0)) {
        return Err(Error::NotHermitian);
    }
    let devs = map_times(times, |t| {
        let u = group.at(t)?;
        let rotated = &(&u.adjoint() * h) * &u;
        Ok((&rotated - h).frobenius_norm_sq().sqrt())
    })?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// Default step for [`stone_recover`].
pub const STONE_DELTA: f64 = 1e-3;

/// Samples `(t, e^{At})` at `t ∈ {-2δ, -δ, δ, 2δ}`.
pub fn stone_samples(a: &QMatF, delta: f64) -> Result<Vec<(f64, QMatF)>> {
    [-2.0, -1.0, 1.0, 2.0].iter().map(|&m| Ok((m * delta, exp_skew(a, m * delta)?))).collect()
}

fn find_sample(samples: &[(f64, QMatF)], t: f64) -> Option<&QMatF> {
    samples.iter().find(|(s, _)| (s - t).abs() <= 1e-12 * t.abs().max(1e-300)).map(|(_, u)| u)
}

/// Generator `A` from samples of `U_t`: central differences at `±δ` and
/// `±2δ`, one Richardson step `(4D(δ) - D(2δ))/3`, then `½(Â - Â†)`.
/// `δ` is the smallest positive sample time with all four partners present.
pub fn stone_recover(samples: &[(f64, QMatF)]) -> Result<QMatF> {
    let mut candidates: Vec<f64> = samples.iter().map(|(t, _)| *t).filter(|t| *t > 0.0).collect();
    candidates.sort_by(f64::total_cmp);
    for delta in candidates {
        let (Some(p1), Some(m1), Some(p2), Some(m2)) = (
            find_sample(samples, delta),
            find_sample(samples, -delta),
            find_sample(samples, 2.0 * delta),
            find_sample(samples, -2.0 * delta),
        ) else {
            continue;
        };
        let d1 = (p1 - m1).scale_real(&(1.0 / (2.0 * delta)));
        let d2 = (p2 - m2).scale_real(&(1.0 / (4.0 * delta)));
        let est = (&d1.scale_real(&4.0) - &d2).scale_real(&(1.0 / 3.0));
        return Ok((&est - &est.adjoint()).scale_real(&0.5));
    }
    Err(Error::InsufficientSamples("need samples at t = ±δ and t = ±2δ for some δ > 0".into()))
}

/// `R[M](x) = (M x*)*`, with `*` the entrywise conjugate.
pub fn nonlinear_isometry(m: &QMatF, x: &QVecF) -> Result<QVecF> {
    Ok(m.apply(&x.conj())?.conj())
}

/// `p_k = <ψ, Π_k ψ> / ‖ψ‖²` for the spectral projections of `h`, by
/// descending eigenvalue.
pub fn projection_probabilities(h: &QMatF, psi: &QVecF) -> Result<Vec<(f64, f64)>> {
    let norm_sq = psi.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Precondition("state must be nonzero".into()));
    }
    spectral_projections(h)?.iter().map(|(value, pi)| Ok((*value, expectation(pi, psi)? / norm_sq))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::QuatGenSpec;
    use crate::qmatrix::QMatrix;
    use crate::quaternion::Quaternion;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(re: f64, i: f64, j: f64, k: f64) -> Quaternion<f64> {
        Quaternion::new(re, i, j, k)
    }

    #[test]
    fn zero_generator_is_constant() {
        let psi = QVector::new(vec![q(1.0, 0.0, 0.5, 0.0), q(0.0, 0.0, 0.0, 1.0)]);
        let traj = evolve(&QMatrix::zeros(2, 2), &psi, TimeGrid::up_to(1.0, 0.25).unwrap(), None).unwrap();
        assert_eq!(traj.states.len(), 5);
        assert!(traj.states.iter().all(|s| *s == psi));
    }

    #[test]
    fn scalar_rotation() {
        let a = QMatrix::diag(&[q(0.0, 1.0, 0.0, 0.0)]);
        let psi = QVector::new(vec![q(1.0, 0.0, 0.0, 0.0)]);
        let traj = evolve(&a, &psi, TimeGrid { t0: 0.0, dt: 0.3, steps: 10 }, None).unwrap();
        for (t, s) in traj.times().iter().zip(&traj.states) {
            let expected = q(t.cos(), t.sin(), 0.0, 0.0);
            assert!((s.get(0) - &expected).max_abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_is_conserved_under_two_level_dynamics() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = QuatGenSpec::with_unit_hbar(random::skew::<f64, _>(&mut rng, 2)).unwrap();
        let h = random::hermitian::<f64, _>(&mut rng, 2);
        let a = generator_from_spec(&GeneratorSpec::Quat(spec), &h).unwrap();
        let psi = random::vector(&mut rng, 2);
        let traj = evolve(&a, &psi, TimeGrid::up_to(5.0, 0.1).unwrap(), Some(&h)).unwrap();
        let e = traj.expectations.as_ref().unwrap();
        assert!(e.iter().all(|v| (v - e[0]).abs() < 1e-8));
        assert!(traj.norm_drift() < 1e-9);
        assert!(conserve_check(&h, &a, &[0.1, 1.0, 10.0]).unwrap() < 1e-9);
    }

    #[test]
    fn conservation_fails_for_rotation() {
        let a = QMatrix::from_rows(vec![
            vec![q(0.0, 0.0, 0.0, 0.0), q(1.0, 0.0, 0.0, 0.0)],
            vec![q(-1.0, 0.0, 0.0, 0.0), q(0.0, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        let h = QMatrix::diag(&[q(1.0, 0.0, 0.0, 0.0), q(0.0, 0.0, 0.0, 0.0)]);
        assert!(conserve_check(&h, &a, &[std::f64::consts::FRAC_PI_2]).unwrap() > 1.0);
        assert!(conserve_check(&QMatrix::identity(2), &a, &[0.3, 7.0]).unwrap() < 1e-12);
    }

    #[test]
    fn stone_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let a: QMatF = random::skew(&mut rng, 3);
            let a = a.scale_real(&(1.0 / a.frobenius_norm_sq().sqrt()));
            let est = stone_recover(&stone_samples(&a, STONE_DELTA).unwrap()).unwrap();
            assert!((&est - &a).frobenius_norm_sq().sqrt() <= 1e-6);
            let group = UnitaryGroup::new(a, 1.0).unwrap();
            assert!(group.group_law_defect(STONE_DELTA, STONE_DELTA).unwrap() <= 1e-10);
        }
        let zero = stone_recover(&stone_samples(&QMatrix::zeros(2, 2), STONE_DELTA).unwrap()).unwrap();
        assert!(zero.is_zero_within(0.0));
        let partial = vec![(0.001, QMatrix::identity(2)), (-0.001, QMatrix::identity(2))];
        assert!(matches!(stone_recover(&partial), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn nonlinear_isometry_examples() {
        let x = QVector::new(vec![q(1.0, 2.0, 3.0, 4.0), q(0.0, -1.0, 0.5, 0.0)]);
        assert_eq!(nonlinear_isometry(&QMatrix::identity(2), &x).unwrap(), x);

        let m = QMatrix::scalar(1, &q(0.0, 0.0, 1.0, 0.0));
        let xi = QVector::new(vec![q(0.0, 1.0, 0.0, 0.0)]);
        assert_eq!(nonlinear_isometry(&m, &xi).unwrap(), QVector::new(vec![q(0.0, 0.0, 0.0, -1.0)]));
        let one = QVector::new(vec![q(1.0, 0.0, 0.0, 0.0)]);
        let i = q(0.0, 1.0, 0.0, 0.0);
        let lhs = nonlinear_isometry(&m, &one.right_scale(&i)).unwrap();
        let rhs = nonlinear_isometry(&m, &one).unwrap().right_scale(&i);
        assert_ne!(lhs, rhs);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = random::unitary(&mut rng, 3);
        let y = random::vector::<f64, _>(&mut rng, 3);
        let z = random::vector::<f64, _>(&mut rng, 3);
        assert!((nonlinear_isometry(&u, &y).unwrap().norm() - y.norm()).abs() < 1e-12);
        let sum = nonlinear_isometry(&u, &(&y + &z)).unwrap();
        let parts = &nonlinear_isometry(&u, &y).unwrap() + &nonlinear_isometry(&u, &z).unwrap();
        assert!((&sum - &parts).max_abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = random::hermitian::<f64, _>(&mut rng, 3);
        let psi = random::vector(&mut rng, 3);
        let p = projection_probabilities(&h, &psi).unwrap();
        assert!(p.iter().all(|(_, v)| (-1e-12..=1.0 + 1e-12).contains(v)));
        assert!((p.iter().map(|(_, v)| v).sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_layout() {
        let a = QMatrix::diag(&[q(0.0, 1.0, 0.0, 0.0)]);
        let h = QMatrix::diag(&[q(2.0, 0.0, 0.0, 0.0)]);
        let psi = QVector::new(vec![q(1.0, 0.0, 0.0, 0.0)]);
        let traj = evolve(&a, &psi, TimeGrid { t0: 0.0, dt: 0.5, steps: 2 }, Some(&h)).unwrap();
        let csv = traj.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,re(psi_1),i(psi_1),j(psi_1),k(psi_1),expect_H");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,0,0,0,2"));
        assert_eq!(traj.to_json()["points"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn three_level_quaternionic_spec_has_no_dynamics() {
        let spec = QuatGenSpec::with_unit_hbar(QMatrix::zeros(3, 3)).unwrap();
        let err = generator_from_spec(&GeneratorSpec::Quat(spec), &QMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::NoDynamics(3));
    }
}
