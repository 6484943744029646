//! Distances between measures on a three-point weight space.
//!
//! `cargo run --example measure_metrics`

use pgraphon::measures::{
    f_norm, fm_norm, kr_norm, prohorov, SignedMeasure, TestFamily, WeightSpace,
};

fn main() -> pgraphon::Result<()> {
    let space = WeightSpace::on_line(&[("low", 0.0), ("mid", 0.5), ("high", 2.0)], None)?.shared();
    let mu = SignedMeasure::probability(space.clone(), vec![0.6, 0.3, 0.1])?;
    let nu = SignedMeasure::probability(space.clone(), vec![0.2, 0.3, 0.5])?;
    let diff = mu.sub(&nu)?;
    let family = TestFamily::canonical(space.clone());

    println!("prohorov      {:.6}", prohorov(&mu, &nu)?);
    println!("kantorovich   {:.6}", kr_norm(&diff)?);
    println!("fortet-mourier {:.6}", fm_norm(&diff)?);
    println!("F-norm        {:.6}", f_norm(&diff, &family)?);

    // Sub-probability measures are allowed too; mass is compared as well
    let lighter = nu.scale(0.8);
    println!("prohorov to 0.8 nu {:.6}", prohorov(&mu, &lighter)?);
    Ok(())
}
