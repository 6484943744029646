//! Coarsening a 64-block graphon to at most 16 classes.
//!
//! `cargo run --release --example weak_regularity`

use pgraphon::cutmetric::{weak_regularity_partition, RegularityOptions};
use pgraphon::measures::{TestFamily, WeightSpace};
use pgraphon::partition::Partition;
use rand::SeedableRng;

fn main() -> pgraphon::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(64);
    let space = WeightSpace::uniform(3, 1.0)?.shared();
    let w = pgraphon::random::probability_graphon(&mut rng, &space, Partition::uniform(64));
    let family = TestFamily::canonical(space);

    for target in [2, 4, 16] {
        let res = weak_regularity_partition(&w, target, &family, &RegularityOptions::default())?;
        println!(
            "target {target:>2}: {} classes after {} rounds, witness {:.5} ({:?}), certified {:.5}, 4/sqrt(log2 k) = {:.3}",
            res.partition.target_count(),
            res.iterations,
            res.error,
            res.error_bound,
            res.certified_bound,
            4.0 / (target as f64).log2().sqrt(),
        );
    }
    Ok(())
}
