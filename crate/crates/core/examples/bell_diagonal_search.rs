//! Looks for transposed Bell-diagonal states with a gap, then scans the
//! element-wise inequality that rules most of them out.
//!
//! cargo run --release --example bell_diagonal_search -- 100000 42

use privrand::belldiag::{elementwise_scan, random_search, SearchConfig};

fn main() -> privrand::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let report = random_search(&SearchConfig::new(samples, seed, true)?);
    println!(
        "{} separable samples, {} with a gap, closest margin {:.6}",
        report.evaluated,
        report.violations.len(),
        report.max_margin
    );

    let scan = elementwise_scan(1e-4)?;
    match scan.failure_hull {
        Some((lo, hi)) => println!("element-wise converse fails only on [{lo:.4}, {hi:.4}]"),
        None => println!("element-wise converse holds everywhere"),
    }
    Ok(())
}
