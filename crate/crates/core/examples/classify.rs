//! Print the kernel dimension of the commutation system for a ring and size.
//!
//! Usage: `cargo run --release --example classify -- quat 3`

use qdyn::kernelsolver::{classify, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let ring = Ring::parse(&args.next().unwrap_or_else(|| "quat".into()))?;
    let n: usize = args.next().unwrap_or_else(|| "2".into()).parse()?;
    let report = classify(ring, n)?;
    println!(
        "{ring} n={n}: X is {}x{}, rank {}, kernel dimension {} ({} ms)",
        report.x_rows, report.x_cols, report.rank, report.kernel_dim, report.elapsed_ms
    );
    Ok(())
}
