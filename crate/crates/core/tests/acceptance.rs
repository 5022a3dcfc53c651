//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdyn::compression::{build_isometry, gram_schmidt, matrix_element_defect};
use qdyn::correspondence::{
    complex_part_generator, conjugate_map, phi_quat, psi_nonadditive, DynamicalMap, QuatGenSpec,
};
use qdyn::evolution::{conserve_check, stone_recover, stone_samples, UnitaryGroup, STONE_DELTA};
use qdyn::kernelsolver::{assemble_x, classify, Fit, Ring};
use qdyn::linsolve;
use qdyn::qmatrix::QMatF;
use qdyn::random;
use qdyn::verify::{run_suite, VerifyConfig};
use qdyn::{CMatrix, QMatrix, Quaternion, Rational, Scalar};

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(stream);
    rng
}

fn q(re: i64, i: i64, j: i64, k: i64) -> Quaternion<Rational> {
    Quaternion::from_ints(re, i, j, k)
}

fn fro(m: &QMatF) -> f64 {
    m.frobenius_norm_sq().sqrt()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: qdyn::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Kernel dimension by dense exact rank, independent of the sparse eliminator.
fn dense_kernel_dim(ring: Ring, n: usize) -> Result<usize, String> {
    let x = lib(assemble_x(ring, n))?;
    let cols = x.num_cols();
    let dense: Vec<Vec<Rational>> = x
        .rows()
        .iter()
        .map(|row| {
            let mut d = vec![<Rational as Scalar>::zero(); cols];
            for (c, v) in row {
                d[*c] = v.clone();
            }
            d
        })
        .collect();
    Ok(cols - linsolve::rank(&dense, cols, 0.0))
}

fn criterion_1() -> Outcome {
    let table = [
        (Ring::Quaternionic, 1, 3),
        (Ring::Quaternionic, 2, 10),
        (Ring::Quaternionic, 3, 0),
        (Ring::Quaternionic, 4, 0),
        (Ring::Complex, 1, 1),
        (Ring::Complex, 2, 5),
        (Ring::Complex, 3, 10),
    ];
    let mut summary = Vec::new();
    for (ring, n, expected) in table {
        let report = lib(classify(ring, n))?;
        ensure(report.kernel_dim == expected, format!("{ring} n={n}: kernel {} != {expected}", report.kernel_dim))?;
        if report.x_cols <= 100 {
            let dense = dense_kernel_dim(ring, n)?;
            ensure(dense == expected, format!("{ring} n={n}: dense oracle gives {dense}"))?;
        }
        summary.push(format!("{ring}{n}={} ({} ms)", report.kernel_dim, report.elapsed_ms));
    }
    Ok(summary.join(" "))
}

fn criterion_2() -> Outcome {
    let report = lib(classify(Ring::Quaternionic, 2))?;
    let mut flat_a = Vec::new();
    for e in &report.elements {
        ensure(e.residual.is_zero(), "nonzero fit residual")?;
        let Some(Fit::Quat(spec)) = &e.fit else { return Err("missing quaternionic fit".into()) };
        for (l, t) in e.map.herm_basis().elements().iter().enumerate() {
            let tr = Quaternion::real(lib(t.trace())?.re);
            let model = &(&(&spec.a * t) + &(t * &spec.a)) - &spec.a.left_scale(&tr);
            ensure(model == e.map.image_of_basis(l), "closed form does not reproduce the map")?;
        }
        flat_a.push(spec.a.entries().iter().flat_map(|x| x.to_array()).collect::<Vec<_>>());
    }
    let span = linsolve::rank(&flat_a, 16, 0.0);
    ensure(span == 10, format!("fitted A span dimension {span}"))?;
    Ok(format!("{} elements, residual 0, span {span}", report.elements.len()))
}

fn criterion_3() -> Outcome {
    let mut summary = Vec::new();
    for n in [2, 3] {
        let report = lib(classify(Ring::Complex, n))?;
        for e in &report.elements {
            ensure(e.residual.is_zero(), "nonzero fit residual")?;
            let Some(Fit::Complex(spec)) = &e.fit else { return Err("missing complex fit".into()) };
            let i = Quaternion::<Rational>::unit_i();
            for (l, t) in e.map.herm_basis().elements().iter().enumerate() {
                let tr = lib(lib(spec.b.matmul(t))?.trace())?.re;
                let model = &t.left_scale(&i.scale(&spec.lambda)) + &QMatrix::scalar(n, &i.scale(&tr));
                ensure(model == e.map.image_of_basis(l), "closed form does not reproduce the map")?;
            }
        }
        summary.push(format!("n={n}: {} elements", report.elements.len()));
    }
    Ok(summary.join(", ") + ", residuals 0")
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    for _ in 0..1000 {
        let a: QMatrix<Rational> = random::skew(&mut rng, 2);
        let h: QMatrix<Rational> = random::hermitian(&mut rng, 2);
        let phi = lib(phi_quat(&lib(QuatGenSpec::with_unit_hbar(a))?, &h))?;
        ensure((&(&phi * &h) - &(&h * &phi)).is_zero_within(0.0), "exact commutator nonzero")?;
    }
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let a: QMatF = random::skew(&mut rng, 2);
        let h: QMatF = random::hermitian(&mut rng, 2);
        let phi = lib(phi_quat(&lib(QuatGenSpec::with_unit_hbar(a.clone()))?, &h))?;
        let d = fro(&(&(&phi * &h) - &(&h * &phi)));
        worst = worst.max(d / (fro(&a) * fro(&h).powi(2)));
    }
    ensure(worst <= 1e-10, format!("float relative defect {worst:e}"))?;
    Ok(format!("exact 0 on 1000, float max relative {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 1 + trial % 2;
        let a: QMatF = random::skew(&mut rng, n);
        let h: QMatF = random::hermitian(&mut rng, n);
        let gen = lib(phi_quat(&lib(QuatGenSpec::with_unit_hbar(a))?, &h))?;
        worst = worst.max(lib(conserve_check(&h, &gen, &[0.1, 1.0, 10.0]))?);
    }
    ensure(worst <= 1e-9, format!("max drift {worst:e}"))?;
    Ok(format!("max |U†HU - H| = {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let (mut recover, mut law): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let a: QMatF = random::skew(&mut rng, 2);
        let a = a.scale_real(&(rng.gen_range(0.05..=1.0) / fro(&a)));
        let est = lib(stone_recover(&lib(stone_samples(&a, STONE_DELTA))?))?;
        recover = recover.max(fro(&(&est - &a)));
        let group = lib(UnitaryGroup::new(a, 1.0))?;
        law = law.max(lib(group.group_law_defect(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))?);
    }
    ensure(recover <= 1e-6, format!("recovery error {recover:e}"))?;
    ensure(law <= 1e-9, format!("group law defect {law:e}"))?;
    Ok(format!("recovery {recover:.1e}, group law {law:.1e}"))
}

/// `A + Bj ↦ [[A, B], [-B̄, Ā]]` built entry by entry.
fn embed_oracle(m: &QMatrix<Rational>) -> CMatrix<Rational> {
    let n = m.rows();
    CMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (a, b) = m.get(r % n, c % n).to_complex_pair();
        match (r < n, c < n) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => -b.conj(),
            (false, false) => a.conj(),
        }
    })
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    for _ in 0..1000 {
        let a: QMatrix<Rational> = random::matrix(&mut rng, 2, 2);
        let b: QMatrix<Rational> = random::matrix(&mut rng, 2, 2);
        let r: Rational = random::scalar(&mut rng);
        let (la, lb) = (lib(a.embed())?, lib(b.embed())?);
        ensure(la == embed_oracle(&a), "embedding differs from block formula")?;
        ensure(lib((&a + &b).embed())? == lib(la.try_add(&lb))?, "not additive")?;
        ensure(lib((&a * &b).embed())? == lib(la.matmul(&lb))?, "not multiplicative")?;
        ensure(lib(a.adjoint().embed())? == la.adjoint(), "does not preserve adjoints")?;
        ensure(lib(a.scale_real(&r).embed())? == la.scale_real(&r), "not real homogeneous")?;
    }
    let one = Complex::new(Rational::from_i64(1), Rational::from_i64(0));
    let zero = Complex::new(Rational::from_i64(0), Rational::from_i64(0));
    let w1 = CMatrix::from_fn(2, 2, |r, c| if (r, c) == (0, 1) { one.clone() } else { zero.clone() });
    let w2 = CMatrix::from_fn(2, 2, |r, c| if (r, c) == (1, 0) { one.clone() } else { zero.clone() });
    let product = lib(QMatrix::unembed(&lib(w1.matmul(&w2))?))?;
    let separate = &lib(QMatrix::unembed(&w1))? * &lib(QMatrix::unembed(&w2))?;
    ensure(product != separate, "left inverse is multiplicative on the witness")?;
    let witness = run_suite("lambda", &VerifyConfig::default()).map_err(|e| e.to_string())?;
    ensure(witness.passed() && witness.witness.is_some(), "verify suite records no witness")?;
    Ok("identities exact on 1000 pairs; witness E01, E10 recorded".into())
}

fn criterion_8() -> Outcome {
    let a = QMatrix::diag(&[q(0, 1, 0, 0), q(0, 0, 0, 0)]);
    let r1 = lib(DynamicalMap::from_quat_spec(&lib(QuatGenSpec::with_unit_hbar(a))?))?.real_rank();
    let half = Rational::new(1.into(), 2.into());
    let a = QMatrix::scalar(
        2,
        &Quaternion::new(Rational::from_i64(0), -half, Rational::from_i64(0), Rational::from_i64(0)),
    );
    let r2 = lib(DynamicalMap::from_quat_spec(&lib(QuatGenSpec::with_unit_hbar(a))?))?.real_rank();
    ensure(r1 == 5 && r2 == 3, format!("ranks {r1}, {r2}"))?;
    Ok(format!("rank(diag(i,0)) = {r1}, rank(-i/2) = {r2}"))
}

fn criterion_9() -> Outcome {
    for d in [[1, 0], [2, -3], [1, 1]] {
        let a = QMatrix::diag(&[q(0, d[0], 0, 0), q(0, d[1], 0, 0)]);
        let map = lib(DynamicalMap::from_quat_spec(&lib(QuatGenSpec::with_unit_hbar(a))?))?;
        let conj = lib(conjugate_map(&map, &QMatrix::scalar(2, &q(0, 0, 1, 0))))?;
        ensure(conj == map.neg(), format!("Φ_V != -Φ for D = diag{d:?}"))?;
    }
    let rep =
        run_suite("covariance", &VerifyConfig { seed: SEED, ..VerifyConfig::default() }).map_err(|e| e.to_string())?;
    ensure(rep.passed(), format!("{:?}", rep.first_failure()))?;
    ensure(rep.witness.is_some(), "no violation witness for generic B")?;
    Ok("Φ_V = -Φ exact; scalar B covariant; generic B witness found".into())
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let hbar = Rational::from_i64(1);
    let half = Rational::new(1.into(), 2.into());
    let a = QMatrix::scalar(
        2,
        &Quaternion::new(Rational::from_i64(0), -half.clone(), Rational::from_i64(0), Rational::from_i64(0)),
    );
    let spec = lib(QuatGenSpec::with_unit_hbar(a))?;
    let i = Quaternion::<Rational>::unit_i();
    for _ in 0..1000 {
        let h: QMatrix<Rational> = random::hermitian(&mut rng, 2);
        let g = lib(complex_part_generator(&h, &hbar))?;
        ensure(g == lib(phi_quat(&spec, &h))?, "complex-part generator differs from Φ_A")?;
        let hc = (&h + &h.left_scale(&i).right_scale(&i.conj())).scale_real(&half);
        let shifted = &hc - &QMatrix::scalar(2, &Quaternion::real(lib(hc.trace())?.re * half.clone()));
        ensure(g == shifted.left_scale(&-i.clone()), "differs from -i(H_c - tr(H_c)/2)")?;
    }
    Ok("exact on 1000 Hermitian 2x2".into())
}

fn criterion_11() -> Outcome {
    let mut rng = rng(11);
    for n in [4, 5] {
        let cols = Ring::Quaternionic.dim_herm(n) * Ring::Quaternionic.dim_aherm(n);
        let mut triples = 0;
        while triples < 100 {
            let x = random::small_int_vector::<Rational, _>(&mut rng, n, 2);
            let y = random::small_int_vector(&mut rng, n, 2);
            let z = random::small_int_vector(&mut rng, n, 2);
            if gram_schmidt(&[x.clone(), y.clone(), z.clone()]).is_err() {
                continue;
            }
            triples += 1;
            let iso = lib(build_isometry(&x, &y, &z))?;
            let gram = &iso.tau.adjoint() * &iso.tau;
            ensure(gram == QMatrix::identity(3), format!("τ†τ != 1 at n={n}"))?;
            let p: Vec<Rational> = (0..cols).map(|_| random::small_int(&mut rng, 2)).collect();
            let phi = lib(DynamicalMap::from_flat(Ring::Quaternionic, n, &p))?;
            ensure(lib(matrix_element_defect(&phi, &iso))?.is_zero(), format!("matrix element changed at n={n}"))?;
        }
    }
    Ok("100 triples each at n=4,5 exact".into())
}

fn criterion_12() -> Outcome {
    let mut rng = rng(12);
    let (mut comm, mut homog): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let h: QMatF = random::hermitian(&mut rng, 2);
        let p = lib(psi_nonadditive(&h))?;
        comm = comm.max(fro(&(&(&p * &h) - &(&h * &p))));
        for r in [2.0, 1.0 / 3.0] {
            homog = homog.max(fro(&(&lib(psi_nonadditive(&h.scale_real(&r)))? - &p.scale_real(&r))));
        }
    }
    ensure(comm <= 1e-9, format!("commutator {comm:e}"))?;
    ensure(homog <= 1e-9, format!("homogeneity {homog:e}"))?;
    let mut gap: f64 = 0.0;
    for _ in 0..100 {
        let h: QMatF = random::hermitian(&mut rng, 2);
        let h2: QMatF = random::hermitian(&mut rng, 2);
        let sum = lib(psi_nonadditive(&(&h + &h2)))?;
        gap = fro(&(&(&sum - &lib(psi_nonadditive(&h))?) - &lib(psi_nonadditive(&h2))?));
        if gap > 1e-3 {
            break;
        }
    }
    ensure(gap > 1e-3, "no additivity violation found")?;
    Ok(format!("commutator {comm:.1e}, homogeneity {homog:.1e}, additivity gap {gap:.3}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("kernel dimension table", criterion_1),
        ("two-level completeness over H", criterion_2),
        ("complex completeness n=2,3", criterion_3),
        ("commutation", criterion_4),
        ("conservation", criterion_5),
        ("generator recovery", criterion_6),
        ("complex embedding", criterion_7),
        ("real ranks", criterion_8),
        ("covariance", criterion_9),
        ("complex-part identity", criterion_10),
        ("compression", criterion_11),
        ("nonadditive map", criterion_12),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{ms} ms]", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{ms} ms]", idx + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
