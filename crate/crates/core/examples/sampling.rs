//! W-random measure graphs and weighted graphs.
//!
//! `cargo run --release --example sampling`

use pgraphon::cutmetric::{cut_dist_exact, Metric};
use pgraphon::graphon::{from_weighted_graph, StepGraphon};
use pgraphon::measures::{MeasureKind, TestFamily, WeightSpace};
use pgraphon::partition::Partition;
use pgraphon::sampling::{measure_graph_graphon, sample_g, sample_g_from_h, sample_h, subsample};

fn main() -> pgraphon::Result<()> {
    // weights "light" and "heavy", plus "none" for missing edges
    let space =
        WeightSpace::on_line(&[("light", 0.0), ("heavy", 1.0), ("none", 2.0)], Some(2))?.shared();
    let w = StepGraphon::from_fn(
        space.clone(),
        Partition::uniform(2),
        MeasureKind::Probability,
        |i, j| {
            if i == j {
                vec![0.6, 0.3, 0.1]
            } else {
                vec![0.1, 0.1, 0.8]
            }
        },
    )?;
    let metric = Metric::FNorm(TestFamily::canonical(space));

    let (h, types) = sample_h(&w, 8, 7)?;
    println!("types {types:?}");
    let g = sample_g_from_h(&h, 7, true)?;
    for i in 0..g.n() {
        let row: Vec<String> = (0..g.n())
            .map(|j| {
                g.weight(i, j)
                    .map_or("-".into(), |z| g.space().points()[z][..1].to_string())
            })
            .collect();
        println!("  {}", row.join(" "));
    }
    let close = cut_dist_exact(
        &from_weighted_graph(&g)?,
        &measure_graph_graphon(&h)?,
        &metric,
    )?;
    println!("d(G(H), H) = {:.4}", close.value);

    let big = sample_g(&w, 12, 1, false)?;
    let small = subsample(&big, 4, 2)?;
    println!("subsample has {} vertices", small.n());
    Ok(())
}
