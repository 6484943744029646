//! Running verification suites and writing their rows as CSV.
//!
//! `cargo run --release --example verify_suites -- [trials]`

use pgraphon::harness::{run, suite_by_name, SUITE_NAMES};

fn main() -> pgraphon::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|t| t.parse().ok())
        .unwrap_or(20);
    for name in SUITE_NAMES {
        let suite = suite_by_name(name).expect("registered suite");
        let report = run(suite.as_ref(), trials, 1)?;
        println!(
            "{name:>12}: {} rows, {} violations",
            report.rows.len(),
            report.violations()
        );
        for agg in report.aggregates() {
            println!(
                "{:>16} median {:.4}  q95 {:.4}",
                agg.check, agg.q50, agg.q95
            );
        }
    }

    let report = run(suite_by_name("stepping").unwrap().as_ref(), 3, 1)?;
    report.write_csv(std::io::stdout())?;
    Ok(())
}
