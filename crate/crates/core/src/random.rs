//! Seeded random instances for tests, examples and experiments.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::graphon::StepGraphon;
use crate::graphs::MeasureGraph;
use crate::measures::{MeasureKind, WeightSpace};
use crate::partition::{Partition, Rational};

/// `m` random points on a line with distances in `[0.05, 3)`, which gives
/// metrics on both sides of the KR cap at 2.
pub fn space<R: Rng>(rng: &mut R, m: usize) -> Arc<WeightSpace> {
    let mut x = 0.0;
    let labels: Vec<String> = (0..m).map(|i| format!("z{i}")).collect();
    let mut pts = Vec::with_capacity(m);
    for l in &labels {
        pts.push((l.as_str(), x));
        x += rng.gen_range(0.05..3.0);
    }
    WeightSpace::on_line(&pts, None)
        .expect("points on a line form a metric")
        .shared()
}

/// Uniform draw from the simplex.
pub fn probability<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Positive measure with total mass in `(0, 1]`.
pub fn sub_probability<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let t: f64 = rng.gen_range(0.0..1.0);
    probability(rng, m)
        .into_iter()
        .map(|x| x * (1.0 - t))
        .collect()
}

/// Interval partition into `k` blocks with lengths in multiples of
/// `1 / denom` (`denom >= k`).
pub fn partition<R: Rng>(rng: &mut R, k: usize, denom: usize) -> Partition {
    assert!(k >= 1 && denom >= k);
    let mut cuts = rand::seq::index::sample(rng, denom - 1, k - 1).into_vec();
    cuts.iter_mut().for_each(|c| *c += 1);
    cuts.sort_unstable();
    cuts.push(denom);
    let mut prev = 0;
    let lengths = cuts
        .into_iter()
        .map(|c| {
            let l = Rational::new((c - prev) as i128, denom as i128);
            prev = c;
            l
        })
        .collect();
    Partition::new(lengths).expect("lengths sum to one")
}

pub fn probability_graphon<R: Rng>(
    rng: &mut R,
    space: &Arc<WeightSpace>,
    partition: Partition,
) -> StepGraphon {
    let m = space.len();
    StepGraphon::from_fn(
        space.clone(),
        partition,
        MeasureKind::Probability,
        |_, _| probability(rng, m),
    )
    .expect("simplex draws are probability measures")
}

pub fn signed_kernel<R: Rng>(
    rng: &mut R,
    space: &Arc<WeightSpace>,
    partition: Partition,
) -> StepGraphon {
    let m = space.len();
    StepGraphon::from_fn(space.clone(), partition, MeasureKind::Signed, |_, _| {
        (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()
    })
    .expect("finite masses")
}

/// `n`-vertex measure graph with random probability measures on edges and
/// the cemetery Dirac on the diagonal.
pub fn measure_graph<R: Rng>(
    rng: &mut R,
    space: &Arc<WeightSpace>,
    n: usize,
) -> Result<MeasureGraph> {
    let m = space.len();
    let cemetery = space.cemetery();
    let mut cells = Vec::with_capacity(n * n * m);
    for i in 0..n {
        for j in 0..n {
            match (i == j, cemetery) {
                (true, Some(c)) => cells.extend((0..m).map(|z| if z == c { 1.0 } else { 0.0 })),
                _ => cells.extend(probability(rng, m)),
            }
        }
    }
    MeasureGraph::new(space.clone(), n, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for m in 2..8 {
            let s = space(&mut rng, m);
            assert_eq!(s.len(), m);
            let p = partition(&mut rng, 3, 6);
            assert_eq!(p.len(), 3);
            let w = probability_graphon(&mut rng, &s, p);
            assert_eq!(w.kind(), MeasureKind::Probability);
            let sp = sub_probability(&mut rng, m);
            assert!(sp.iter().sum::<f64>() <= 1.0 + 1e-12);
        }
    }
}
