//! Labeled cut distance and the minimum over block relabelings.
//!
//! `cargo run --release --example cut_distance`

use pgraphon::cutmetric::{cut_dist_exact, delta_cut, DeltaOptions, Metric};
use pgraphon::graphon::{embed_real_graphon, relabel};
use pgraphon::measures::{TestFamily, WeightSpace};
use pgraphon::partition::Partition;

fn main() -> pgraphon::Result<()> {
    let space = WeightSpace::binary().shared();
    let p = vec![
        vec![0.9, 0.1, 0.4, 0.2],
        vec![0.1, 0.7, 0.3, 0.5],
        vec![0.4, 0.3, 0.2, 0.6],
        vec![0.2, 0.5, 0.6, 0.8],
    ];
    let w = embed_real_graphon(space.clone(), &p, Partition::uniform(4))?;
    let shuffled = relabel(&w, &[2, 0, 3, 1])?;
    let metric = Metric::FNorm(TestFamily::canonical(space));

    println!(
        "labeled distance {:.6}",
        cut_dist_exact(&w, &shuffled, &metric)?.value
    );

    let brute = delta_cut(&w, &shuffled, &metric, &DeltaOptions::brute(4))?;
    println!(
        "brute force: {} with sigma {:?} after {} evaluations",
        brute.value, brute.permutation, brute.evaluations
    );

    let anneal = delta_cut(&w, &shuffled, &metric, &DeltaOptions::anneal(8, 1))?;
    println!(
        "annealing at 8 blocks: {:.6} ({:?})",
        anneal.value, anneal.bound
    );

    for metric in [Metric::Kr, Metric::Prohorov] {
        let d = delta_cut(&w, &shuffled, &metric, &DeltaOptions::brute(4))?;
        println!("{:>8}: {}", metric.name(), d.value);
    }
    Ok(())
}
