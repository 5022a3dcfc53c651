//! `qdyn`: kernel classification, evolution runs and property suites.
//!
//! Exit codes: 0 success, 2 configuration error, 3 internal consistency
//! failure, 4 no dynamics for the requested dimension, 5 property failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use qdyn::evolution::{evolve, generator_from_spec, TimeGrid};
use qdyn::json::{matrix_from_json, spec_from_json, vector_from_json, GeneratorSpec};
use qdyn::kernelsolver::{classify, Ring};
use qdyn::verify::{self, Mode, VerifyConfig};
use qdyn::Error;

const MAX_SAFE_N: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "qdyn",
    version,
    about = "Quaternionic dynamical correspondences: exact classification, evolution and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact kernel of the commutation system for a ring and dimension.
    Kernel(KernelArgs),
    /// Evolve a state under the generator of a correspondence; writes CSV.
    Evolve(EvolveArgs),
    /// Run seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RingArg {
    Quat,
    Complex,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Quat => Ring::Quaternionic,
            RingArg::Complex => Ring::Complex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed recorded in the report and used by randomized suites.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the report to this file as well as stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long, value_enum, default_value = "quat")]
    ring: RingArg,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Arithmetic mode; the kernel is always computed exactly.
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Allow n above the default cap of 5.
    #[arg(long)]
    unsafe_n: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    /// Generator spec JSON (`{"ring": "quat", "A": ..., "hbar": ...}` or `{"ring": "complex", "lambda": ..., "B": ...}`).
    #[arg(long)]
    spec: PathBuf,
    /// Hamiltonian matrix JSON.
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Initial state vector JSON.
    #[arg(long)]
    psi0: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    /// Overrides ℏ from a quaternionic generator file.
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[command(flatten)]
    common: Common,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoDynamics(_) => 4,
            Error::Internal(_)
            | Error::NonzeroDefect(_)
            | Error::InconsistentSystem(_)
            | Error::Convergence
            | Error::NotInEmbeddingImage => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("QDYN_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::config(format!("QDYN_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure { code: 3, message: format!("thread pool: {e}") })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::config(format!("invalid JSON in {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = out {
        fs::write(path, text).map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{text}");
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn cmd_kernel(args: &KernelArgs) -> Result<(), Failure> {
    if args.n == 0 || (args.n > MAX_SAFE_N && !args.unsafe_n) {
        return Err(Failure::config(format!(
            "--n must be between 1 and {MAX_SAFE_N} (use --unsafe-n to lift the cap)"
        )));
    }
    if matches!(args.mode, ModeArg::Float) {
        eprintln!("note: kernel classification always uses exact arithmetic; --mode float ignored");
    }
    let report = classify(args.ring.into(), args.n)?;
    emit(&pretty(&report.to_json(args.common.seed)), args.common.out.as_deref())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<(), Failure> {
    let mut spec: GeneratorSpec<f64> = spec_from_json(&read_json(&args.spec)?)?;
    if let (Some(h), GeneratorSpec::Quat(q)) = (args.hbar, &mut spec) {
        if h.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Failure::config("--hbar must be positive"));
        }
        q.hbar = h;
    }
    let h = matrix_from_json::<f64>(&read_json(&args.hamiltonian)?)?;
    let psi0 = vector_from_json::<f64>(&read_json(&args.psi0)?)?;
    let a = generator_from_spec(&spec, &h)?;
    let grid = TimeGrid::up_to(args.t_max, args.dt)?;
    let trajectory = evolve(&a, &psi0, grid, Some(&h))?;
    let text = match args.format {
        Format::Csv => trajectory.to_csv(),
        Format::Json => pretty(&trajectory.to_json()),
    };
    emit(&text, args.common.out.as_deref())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig { seed: args.common.seed, n: args.n, mode: args.mode.into(), hbar: args.hbar };
    let reports = verify::run(&args.suite, &cfg)?;
    for r in &reports {
        eprintln!("{:<14} {}", r.suite, if r.passed() { "PASS" } else { "FAIL" });
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("    failed: {} {}", c.name, c.detail);
        }
    }
    emit(&pretty(&verify::report_json(&reports, &cfg)), args.common.out.as_deref())?;
    match reports.iter().find_map(|r| r.first_failure()) {
        Some(name) => Err(Failure { code: 5, message: format!("property failed: {name}") }),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Kernel(a) => cmd_kernel(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Verify(a) => cmd_verify(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qdyn: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
