//! Homomorphism densities of decorated graphs.
//!
//! `cargo run --release --example homomorphism_densities`

use pgraphon::graphon::embed_real_graphon;
use pgraphon::homdensity::{
    edge_joint_measure, hom_density_exact, hom_density_graph, hom_density_mc,
    inverse_counting_decorations, DecoratedGraph,
};
use pgraphon::measures::{TestFamily, WeightSpace};
use pgraphon::partition::Partition;
use pgraphon::sampling::sample_g;

fn main() -> pgraphon::Result<()> {
    let space = WeightSpace::binary().with_cemetery(Some(0))?.shared();
    let w = embed_real_graphon(
        space.clone(),
        &[vec![0.8, 0.2], vec![0.2, 0.5]],
        Partition::uniform(2),
    )?;
    let family = TestFamily::canonical(space.clone());

    // triangle counting edges of weight "1"
    let triangle =
        DecoratedGraph::from_family(3, vec![(0, 1), (1, 2), (2, 0)], &family, vec![2, 2, 2])?;
    let exact = hom_density_exact(&triangle, &w)?;
    let (mc, se) = hom_density_mc(&triangle, &w, 20_000, 3)?;
    println!("triangle: exact {exact:.6}, monte carlo {mc:.6} +- {se:.6}");
    println!(
        "counting constant {}",
        triangle.counting_constant().unwrap_or(f64::NAN)
    );

    let g = sample_g(&w, 60, 9, false)?;
    println!(
        "in a 60-vertex sample: {:.6}",
        hom_density_graph(&triangle, &g)?
    );

    let law = edge_joint_measure(2, &[(0, 1), (1, 0)], &w)?;
    println!("joint law of (w01, w10): {:?}", law.entries);

    for f in inverse_counting_decorations(&family, 2)? {
        println!("f^s = {f:?}");
    }
    Ok(())
}
