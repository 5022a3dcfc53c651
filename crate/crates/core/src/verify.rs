//! Seeded property suites. Each suite draws from its own ChaCha stream, so
//! results do not depend on which other suites run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::compression::{build_isometry, gram_schmidt, matrix_element_defect};
use crate::correspondence::{
    complex_part_generator, conjugate_map, phi_quat, psi_nonadditive, ComplexGenSpec, DynamicalMap, QuatGenSpec,
};
use crate::error::{Error, Result};
use crate::evolution::{conserve_check, stone_recover, stone_samples, UnitaryGroup, STONE_DELTA};
use crate::json::matrix_to_json;
use crate::kernelsolver::{classify, Ring};
use crate::qmatrix::{CMatrix, QMatF, QMatrix};
use crate::quaternion::Quaternion;
use crate::random;
use crate::scalar::{Rational, Scalar};
use crate::spectral::eig_normal;

/// Arithmetic used by suites that support both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }

    pub fn parse(text: &str) -> Result<Mode> {
        match text {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?} (expected exact or float)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub n: usize,
    pub mode: Mode,
    pub hbar: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 42, n: 2, mode: Mode::Exact, hbar: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub witness: Option<Value>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport { suite, checks: Vec::new(), witness: None }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `suite/check` of the first failing check.
    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.passed).map(|c| format!("{}/{}", self.suite, c.name))
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> =
            self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
        let mut v = json!({"suite": self.suite, "passed": self.passed(), "checks": checks});
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

pub const SUITES: [&str; 10] = [
    "commutation",
    "conservation",
    "stone",
    "lambda",
    "rank",
    "covariance",
    "complex-part",
    "compression",
    "psi",
    "kernel",
];

fn rng_for(cfg: &VerifyConfig, suite: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stream = SUITES.iter().position(|s| *s == suite).unwrap_or(SUITES.len()) as u64;
    rng.set_stream(stream);
    rng
}

fn fro(m: &QMatF) -> f64 {
    m.frobenius_norm_sq().sqrt()
}

fn q(re: i64, i: i64, j: i64, k: i64) -> Quaternion<Rational> {
    Quaternion::from_ints(re, i, j, k)
}

fn exact_hbar(cfg: &VerifyConfig) -> Result<Rational> {
    Rational::from_f64(cfg.hbar)
        .filter(|h| h.to_f64() > 0.0)
        .ok_or_else(|| Error::Precondition(format!("invalid hbar {}", cfg.hbar)))
}

/// `[Φ_A(H), H] = 0` for two levels; for more levels a violation is expected.
fn commutation(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("commutation");
    let mut rng = rng_for(cfg, rep.suite);
    let samples = 1000;
    if cfg.n > 2 {
        let mut found = None;
        for _ in 0..200 {
            let a: QMatrix<Rational> = random::skew(&mut rng, cfg.n);
            let h: QMatrix<Rational> = random::hermitian(&mut rng, cfg.n);
            let defect = phi_quat(&QuatGenSpec::with_unit_hbar(a.clone())?, &h)?.commutator(&h)?;
            if !defect.is_zero_within(0.0) {
                found = Some(json!({"A": matrix_to_json(&a), "H": matrix_to_json(&h)}));
                break;
            }
        }
        rep.check("violation_witness_exists", found.is_some(), json!({"n": cfg.n}));
        rep.witness = found;
        return Ok(rep);
    }
    match cfg.mode {
        Mode::Exact => {
            let mut failures = 0;
            for _ in 0..samples {
                let a: QMatrix<Rational> = random::skew(&mut rng, cfg.n);
                let h: QMatrix<Rational> = random::hermitian(&mut rng, cfg.n);
                if !phi_quat(&QuatGenSpec::with_unit_hbar(a)?, &h)?.commutator(&h)?.is_zero_within(0.0) {
                    failures += 1;
                }
            }
            rep.check("exact_zero_defect", failures == 0, json!({"samples": samples, "failures": failures}));
        }
        Mode::Float => {
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let a: QMatF = random::skew(&mut rng, cfg.n);
                let h: QMatF = random::hermitian(&mut rng, cfg.n);
                let d = fro(&phi_quat(&QuatGenSpec::with_unit_hbar(a.clone())?, &h)?.commutator(&h)?);
                worst = worst.max(d / (fro(&a) * fro(&h).powi(2)).max(f64::MIN_POSITIVE));
            }
            rep.check("relative_defect", worst <= 1e-10, json!({"samples": samples, "max": worst, "bound": 1e-10}));
        }
    }
    Ok(rep)
}

fn conservation(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("conservation");
    let mut rng = rng_for(cfg, rep.suite);
    let n = cfg.n.clamp(1, 2);
    let times = [0.1, 1.0, 10.0];
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let spec = QuatGenSpec::new(random::skew::<f64, _>(&mut rng, n), cfg.hbar)?;
        let h: QMatF = random::hermitian(&mut rng, n);
        let a = phi_quat(&spec, &h)?.scale_real(&(1.0 / spec.hbar));
        worst = worst.max(conserve_check(&h, &a, &times)?);
    }
    rep.check(
        "hamiltonian_conserved",
        worst <= 1e-9,
        json!({"n": n, "pairs": 100, "times": times, "max": worst, "bound": 1e-9}),
    );
    Ok(rep)
}

fn stone(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("stone");
    let mut rng = rng_for(cfg, rep.suite);
    let (mut recover, mut law): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let a: QMatF = random::skew(&mut rng, cfg.n);
        let norm = fro(&a);
        let a = if norm > 0.0 { a.scale_real(&(rng.gen_range(0.05..=1.0) / norm)) } else { a };
        let est = stone_recover(&stone_samples(&a, STONE_DELTA)?)?;
        recover = recover.max(fro(&(&est - &a)));
        let group = UnitaryGroup::new(a, 1.0)?;
        law = law.max(group.group_law_defect(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))?);
    }
    rep.check(
        "generator_recovered",
        recover <= 1e-6,
        json!({"samples": 100, "delta": STONE_DELTA, "max": recover, "bound": 1e-6}),
    );
    rep.check("group_law", law <= 1e-9, json!({"max": law, "bound": 1e-9}));
    Ok(rep)
}

/// Witness that the left inverse of `Λ` is not multiplicative.
pub fn unembed_witness() -> Result<(CMatrix<Rational>, CMatrix<Rational>)> {
    let one = q(1, 0, 0, 0);
    let w1 = CMatrix::new(QMatrix::unit(2, 0, 1, &one))?;
    let w2 = CMatrix::new(QMatrix::unit(2, 1, 0, &one))?;
    Ok((w1, w2))
}

fn lambda(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("lambda");
    let mut rng = rng_for(cfg, rep.suite);
    let n = cfg.n.max(1);
    let samples = 1000;
    let mut failures = [0usize; 5];
    let names = ["additive", "multiplicative", "adjoint", "real_homogeneous", "left_inverse"];
    for _ in 0..samples {
        let a: QMatrix<Rational> = random::matrix(&mut rng, n, n);
        let b: QMatrix<Rational> = random::matrix(&mut rng, n, n);
        let r: Rational = random::scalar(&mut rng);
        let (la, lb) = (a.embed()?, b.embed()?);
        let ok = [
            (&a + &b).embed()? == la.try_add(&lb)?,
            (&a * &b).embed()? == la.matmul(&lb)?,
            a.adjoint().embed()? == la.adjoint(),
            a.scale_real(&r).embed()? == la.scale_real(&r),
            QMatrix::unembed(&la)? == a,
        ];
        for (f, ok) in failures.iter_mut().zip(ok) {
            if !ok {
                *f += 1;
            }
        }
    }
    for (name, f) in names.iter().zip(failures) {
        rep.check(*name, f == 0, json!({"samples": samples, "failures": f}));
    }
    let (w1, w2) = unembed_witness()?;
    let product = QMatrix::unembed(&w1.matmul(&w2)?)?;
    let separate = &QMatrix::unembed(&w1)? * &QMatrix::unembed(&w2)?;
    rep.check("unembed_not_multiplicative", product != separate, json!({}));
    rep.witness = Some(json!({
        "w1": matrix_to_json(w1.as_qmatrix()),
        "w2": matrix_to_json(w2.as_qmatrix()),
        "unembed(w1 w2)": matrix_to_json(&product),
        "unembed(w1) unembed(w2)": matrix_to_json(&separate),
    }));
    Ok(rep)
}

fn rank(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("rank");
    let hbar = exact_hbar(cfg)?;
    let a = QMatrix::diag(&[q(0, 1, 0, 0), q(0, 0, 0, 0)]);
    let r1 = DynamicalMap::from_quat_spec(&QuatGenSpec::new(a, hbar.clone())?)?.real_rank();
    rep.check("rank_diag_i_0", r1 == 5, json!({"rank": r1, "expected": 5}));
    let coeff = -(Rational::from_i64(2) * hbar.clone()).checked_recip().ok_or(Error::DivisionByZero)?;
    let a = QMatrix::scalar(2, &Quaternion::new(Rational::zero(), coeff, Rational::zero(), Rational::zero()));
    let r2 = DynamicalMap::from_quat_spec(&QuatGenSpec::new(a, hbar)?)?.real_rank();
    rep.check("rank_minus_i_over_2hbar", r2 == 3, json!({"rank": r2, "expected": 3}));
    Ok(rep)
}

fn covariance(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("covariance");
    let mut rng = rng_for(cfg, rep.suite);
    let n = cfg.n.clamp(1, 2);

    let d: Vec<Quaternion<Rational>> = (0..n)
        .map(|_| Quaternion::new(Rational::zero(), random::small_int(&mut rng, 5), Rational::zero(), Rational::zero()))
        .collect();
    let a = QMatrix::diag(&d);
    let map = DynamicalMap::from_quat_spec(&QuatGenSpec::with_unit_hbar(a.clone())?)?;
    let v = QMatrix::scalar(n, &q(0, 0, 1, 0));
    let conj = conjugate_map(&map, &v)?;
    rep.check("phi_v_equals_minus_phi", conj == map.neg(), json!({"A": matrix_to_json(&a), "V": "j*1"}));

    let a: QMatF = random::skew(&mut rng, n);
    let dec = eig_normal(&a, 1e-12)?;
    let v = &(&dec.u.adjoint() * &QMatrix::scalar(n, &Quaternion::new(0.0, 0.0, 1.0, 0.0))) * &dec.u;
    let map = DynamicalMap::from_quat_spec(&QuatGenSpec::with_unit_hbar(a)?)?;
    let dev =
        conjugate_map(&map, &v)?.try_add(&map)?.coefficients().iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    rep.check("phi_v_equals_minus_phi_after_diagonalizing", dev <= 1e-9, json!({"max": dev, "bound": 1e-9}));

    let mu = random::uniform(&mut rng, 1.0);
    let spec = ComplexGenSpec::new(random::uniform(&mut rng, 1.0), QMatrix::identity(n).scale_real(&mu))?;
    let map = DynamicalMap::from_complex_spec(&spec)?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = random::complex_unitary(&mut rng, n);
        let diff = conjugate_map(&map, &v)?.try_add(&map.neg())?;
        worst = worst.max(diff.coefficients().iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())));
    }
    rep.check("complex_scalar_b_covariant", worst <= 1e-10, json!({"unitaries": 100, "max": worst, "bound": 1e-10}));

    let mut witness = None;
    if n >= 2 {
        for _ in 0..100 {
            let b: QMatF = random::complex_hermitian(&mut rng, n);
            let spec = ComplexGenSpec::new(1.0, b.clone())?;
            let map = DynamicalMap::from_complex_spec(&spec)?;
            let v = random::complex_unitary(&mut rng, n);
            let diff = conjugate_map(&map, &v)?.try_add(&map.neg())?;
            let dev = diff.coefficients().iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            if dev > 1e-3 {
                witness = Some(json!({"B": matrix_to_json(&b), "V": matrix_to_json(&v), "deviation": dev}));
                break;
            }
        }
        rep.check("complex_generic_b_violation_found", witness.is_some(), json!({}));
    }
    rep.witness = witness;
    Ok(rep)
}

fn complex_part(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("complex-part");
    let mut rng = rng_for(cfg, rep.suite);
    let hbar = exact_hbar(cfg)?;
    let coeff = -(Rational::from_i64(2) * hbar.clone()).checked_recip().ok_or(Error::DivisionByZero)?;
    let a = QMatrix::scalar(2, &Quaternion::new(Rational::zero(), coeff, Rational::zero(), Rational::zero()));
    let spec = QuatGenSpec::new(a, hbar.clone())?;
    let samples = 1000;
    let mut failures = 0;
    for _ in 0..samples {
        let h: QMatrix<Rational> = random::hermitian(&mut rng, 2);
        if complex_part_generator(&h, &hbar)? != phi_quat(&spec, &h)? {
            failures += 1;
        }
    }
    rep.check("equals_phi_quat_minus_i_over_2hbar", failures == 0, json!({"samples": samples, "failures": failures}));
    Ok(rep)
}

fn compression(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("compression");
    let mut rng = rng_for(cfg, rep.suite);
    for n in [4, 5] {
        let (mut iso_fail, mut elem_fail, mut triples) = (0, 0, 0);
        let dims = (Ring::Quaternionic.dim_herm(n), Ring::Quaternionic.dim_aherm(n));
        while triples < 100 {
            let x = random::small_int_vector::<Rational, _>(&mut rng, n, 2);
            let y = random::small_int_vector(&mut rng, n, 2);
            let z = random::small_int_vector(&mut rng, n, 2);
            if gram_schmidt(&[x.clone(), y.clone(), z.clone()]).is_err() {
                continue;
            }
            triples += 1;
            let iso = build_isometry(&x, &y, &z)?;
            if !iso.max_defect()?.is_zero() {
                iso_fail += 1;
            }
            let p: Vec<Rational> = (0..dims.0 * dims.1).map(|_| random::small_int(&mut rng, 2)).collect();
            let phi = DynamicalMap::from_flat(Ring::Quaternionic, n, &p)?;
            if !matrix_element_defect(&phi, &iso)?.is_zero() {
                elem_fail += 1;
            }
        }
        rep.check(format!("isometry_exact_n{n}"), iso_fail == 0, json!({"triples": triples, "failures": iso_fail}));
        rep.check(
            format!("matrix_elements_preserved_n{n}"),
            elem_fail == 0,
            json!({"triples": triples, "failures": elem_fail}),
        );
    }
    Ok(rep)
}

fn psi(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("psi");
    let mut rng = rng_for(cfg, rep.suite);
    let n = cfg.n.max(1);
    let (mut comm, mut homog): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let h: QMatF = random::hermitian(&mut rng, n);
        let p = psi_nonadditive(&h)?;
        comm = comm.max(fro(&p.commutator(&h)?));
        for r in [2.0, 1.0 / 3.0] {
            homog = homog.max(fro(&(&psi_nonadditive(&h.scale_real(&r))? - &p.scale_real(&r))));
        }
    }
    rep.check("commutes_with_argument", comm <= 1e-9, json!({"samples": 100, "max": comm, "bound": 1e-9}));
    rep.check("positively_homogeneous", homog <= 1e-9, json!({"r": [2.0, 1.0 / 3.0], "max": homog, "bound": 1e-9}));
    let mut witness = None;
    if n >= 2 {
        for _ in 0..100 {
            let h: QMatF = random::hermitian(&mut rng, n);
            let h2: QMatF = random::hermitian(&mut rng, n);
            let gap = fro(&(&(&psi_nonadditive(&(&h + &h2))? - &psi_nonadditive(&h)?) - &psi_nonadditive(&h2)?));
            if gap > 1e-3 {
                witness = Some(json!({"H": matrix_to_json(&h), "H_prime": matrix_to_json(&h2), "gap": gap}));
                break;
            }
        }
        rep.check("additivity_violation_found", witness.is_some(), json!({}));
    }
    rep.witness = witness;
    Ok(rep)
}

/// Expected kernel dimensions of the commutation system.
pub const KERNEL_TABLE: [(Ring, usize, usize); 7] = [
    (Ring::Quaternionic, 1, 3),
    (Ring::Quaternionic, 2, 10),
    (Ring::Quaternionic, 3, 0),
    (Ring::Quaternionic, 4, 0),
    (Ring::Complex, 1, 1),
    (Ring::Complex, 2, 5),
    (Ring::Complex, 3, 10),
];

fn kernel(_cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("kernel");
    for (ring, n, expected) in KERNEL_TABLE {
        let report = classify(ring, n)?;
        let residual_zero = report.max_residual().is_zero();
        rep.check(
            format!("{ring}_n{n}"),
            report.kernel_dim == expected && residual_zero,
            json!({"kernel_dim": report.kernel_dim, "expected": expected, "residuals_zero": residual_zero}),
        );
    }
    Ok(rep)
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    match name {
        "commutation" => commutation(cfg),
        "conservation" => conservation(cfg),
        "stone" => stone(cfg),
        "lambda" => lambda(cfg),
        "rank" => rank(cfg),
        "covariance" => covariance(cfg),
        "complex-part" => complex_part(cfg),
        "compression" => compression(cfg),
        "psi" => psi(cfg),
        "kernel" => kernel(cfg),
        other => Err(Error::Parse(format!("unknown suite {other:?}; expected one of {} or all", SUITES.join(", ")))),
    }
}

/// Run one suite, or every suite for `"all"`.
pub fn run(name: &str, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        SUITES.iter().map(|s| run_suite(s, cfg)).collect()
    } else {
        Ok(vec![run_suite(name, cfg)?])
    }
}

/// Combined report; contains no timing data, so it is reproducible from the seed.
pub fn report_json(reports: &[SuiteReport], cfg: &VerifyConfig) -> Value {
    json!({
        "version": crate::VERSION,
        "mode": cfg.mode.name(),
        "seed": cfg.seed,
        "n": cfg.n,
        "hbar": cfg.hbar,
        "passed": reports.iter().all(SuiteReport::passed),
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    })
}
