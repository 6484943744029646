//! Averaging a graphon over a partition.
//!
//! `cargo run --example stepping`

use pgraphon::cutmetric::{cut_dist_exact, Metric};
use pgraphon::graphon::{stepping, StepGraphon};
use pgraphon::io::graphon_to_json;
use pgraphon::measures::{MeasureKind, TestFamily, WeightSpace};
use pgraphon::partition::Partition;

fn main() -> pgraphon::Result<()> {
    let space = WeightSpace::uniform(3, 1.0)?.shared();
    let w = StepGraphon::from_fn(
        space.clone(),
        Partition::parse(&["1/6", "1/3", "1/2"])?,
        MeasureKind::Probability,
        |i, j| match (i + j) % 3 {
            0 => vec![0.8, 0.1, 0.1],
            1 => vec![0.1, 0.8, 0.1],
            _ => vec![0.2, 0.2, 0.6],
        },
    )?;
    let halves = Partition::uniform(2);
    let stepped = stepping(&w, &halves)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&graphon_to_json(&stepped))?
    );

    let metric = Metric::FNorm(TestFamily::canonical(space));
    println!(
        "d(W, W_P) = {:.6}",
        cut_dist_exact(&w, &stepped, &metric)?.value
    );
    // stepping onto the trivial partition keeps only the average measure
    let flat = stepping(&stepped, &Partition::trivial())?;
    println!("average cell {:?}", flat.cell(0, 0));
    Ok(())
}
