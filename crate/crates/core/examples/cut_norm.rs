//! Exact and heuristic cut norms of a signed kernel, with witnesses.
//!
//! `cargo run --release --example cut_norm`

use pgraphon::cutmetric::{cut_norm_exact, cut_norm_heuristic, Metric, SearchOptions};
use pgraphon::graphon::StepGraphon;
use pgraphon::measures::{MeasureKind, TestFamily, WeightSpace};
use pgraphon::partition::Partition;

fn main() -> pgraphon::Result<()> {
    let space = WeightSpace::binary().shared();
    // point "1" carries +-0.2, point "0" the opposite sign
    let d = StepGraphon::from_fn(
        space.clone(),
        Partition::uniform(2),
        MeasureKind::Signed,
        |i, j| {
            let s = if i == j { 0.2 } else { -0.2 };
            vec![-s, s]
        },
    )?;
    let family = Metric::FNorm(TestFamily::canonical(space.clone()));
    let wit = cut_norm_exact(&d, &family)?;
    println!(
        "F-norm cut norm {} on rows {:?} cols {:?} signs {:?}",
        wit.value, wit.rows, wit.cols, wit.signs
    );
    println!("{}", serde_json::to_string(&wit)?);

    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
    let big = pgraphon::random::signed_kernel(&mut rng, &space, Partition::uniform(12));
    for metric in [family, Metric::Kr, Metric::Fm] {
        let exact = cut_norm_exact(&big, &metric)?;
        let quick = cut_norm_heuristic(&big, &metric, SearchOptions::default())?;
        println!(
            "{:>6}: exact {:.6}, local search {:.6}",
            metric.name(),
            exact.value,
            quick.value
        );
    }
    Ok(())
}
