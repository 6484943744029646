//! W-random graphs and subsampling.
//!
//! All randomness comes from ChaCha8 seeded with the user's seed. Each
//! purpose reads its own stream:
//!
//! | stream | use |
//! |--------|-----|
//! | 0 | vertex types |
//! | 1 | edge weights; edge `(i, j)` of an `n`-vertex graph reads the 64-bit word at position `i * n + j` |
//! | 2 | vertex choice in [`subsample`] |
//! | 3 | per-trial seeds ([`trial_seed`]) |
//!
//! Edge draws are addressed by position rather than consumed in sequence,
//! so a weight does not depend on how many other edges were drawn.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{MeasureGraph, SampledGraph};
use crate::measures::MeasureKind;
use crate::partition::Partition;

pub const STREAM_TYPES: u64 = 0;
pub const STREAM_EDGES: u64 = 1;
pub const STREAM_SUBSAMPLE: u64 = 2;
pub const STREAM_TRIALS: u64 = 3;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of trial `trial` in an experiment run with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut rng = stream(seed, STREAM_TRIALS);
    rng.set_word_pos(2 * trial as u128);
    rng.next_u64()
}

fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index drawn from the categorical law `mass` with uniform `u` in `[0, 1)`.
fn categorical(mass: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    for (z, &p) in mass.iter().enumerate() {
        cum += p;
        if u < cum {
            return z;
        }
    }
    // rounding left u above the total: take the last atom
    mass.iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(mass.len() - 1)
}

/// Blocks of `k` i.i.d. uniform points of `[0, 1]`. Each point is drawn
/// exactly as one of the `D` equal cells of the common denominator `D`,
/// which lie inside a single block.
pub fn sample_types(partition: &Partition, k: usize, seed: u64) -> Vec<usize> {
    let denom = partition.common_denominator();
    let bounds = partition.boundaries();
    let mut rng = stream(seed, STREAM_TYPES);
    (0..k)
        .map(|_| {
            let cell = rng.gen_range(0..denom);
            let x = crate::partition::Rational::new(cell, denom);
            bounds
                .iter()
                .position(|b| x < *b)
                .expect("cell start below 1")
        })
        .collect()
}

/// `W_X`: the `k`-block stepfunction with `W_X(i, j) = W(x_i, x_j)` for
/// vertex types given by block, diagonal included.
pub fn type_graphon(w: &StepGraphon, types: &[usize]) -> Result<StepGraphon> {
    if types.is_empty() || types.iter().any(|&t| t >= w.k()) {
        return Err(Error::InvalidGraph(
            "vertex types must be blocks of the graphon".into(),
        ));
    }
    StepGraphon::from_fn(
        w.space().clone(),
        Partition::uniform(types.len()),
        w.kind(),
        |i, j| w.cell(types[i], types[j]).to_vec(),
    )
}

/// `W_X` with vertices sorted by type and vertices of equal type merged:
/// block `b` of `w` becomes a block of length `#{i : x_i = b} / k`. This is
/// a relabeling of [`type_graphon`] up to twin blocks, so cut norms and
/// distances to other kernels are unchanged, but the size is at most
/// `w.k()` instead of `k`.
pub fn sorted_type_graphon(w: &StepGraphon, types: &[usize]) -> Result<StepGraphon> {
    if types.is_empty() || types.iter().any(|&t| t >= w.k()) {
        return Err(Error::InvalidGraph(
            "vertex types must be blocks of the graphon".into(),
        ));
    }
    let mut counts = vec![0i128; w.k()];
    for &t in types {
        counts[t] += 1;
    }
    let present: Vec<usize> = (0..w.k()).filter(|&b| counts[b] > 0).collect();
    let n = types.len() as i128;
    let lengths = present
        .iter()
        .map(|&b| crate::partition::Rational::new(counts[b], n))
        .collect();
    let mut cells = Vec::with_capacity(present.len() * present.len() * w.m());
    for &a in &present {
        for &b in &present {
            cells.extend_from_slice(w.cell(a, b));
        }
    }
    StepGraphon::new(w.space().clone(), Partition::new(lengths)?, cells, w.kind())
}

/// `H(X, W)` for given vertex types. The diagonal carries the cemetery Dirac,
/// or `W(x_i, x_i)` on spaces without a cemetery.
pub fn measure_graph_from_types(w: &StepGraphon, types: &[usize]) -> Result<MeasureGraph> {
    if w.kind() != MeasureKind::Probability {
        return Err(Error::InvalidGraphon(
            "sampling needs a probability-graphon".into(),
        ));
    }
    if types.iter().any(|&t| t >= w.k()) {
        return Err(Error::InvalidGraph(
            "vertex types must be blocks of the graphon".into(),
        ));
    }
    let n = types.len();
    let m = w.m();
    let mut cells = Vec::with_capacity(n * n * m);
    for i in 0..n {
        for j in 0..n {
            match (i == j, w.space().cemetery()) {
                (true, Some(c)) => cells.extend((0..m).map(|z| if z == c { 1.0 } else { 0.0 })),
                _ => cells.extend_from_slice(w.cell(types[i], types[j])),
            }
        }
    }
    MeasureGraph::new(w.space().clone(), n, cells)
}

/// `H(k, W)` with its vertex types.
pub fn sample_h(w: &StepGraphon, k: usize, seed: u64) -> Result<(MeasureGraph, Vec<usize>)> {
    if k == 0 {
        return Err(Error::InvalidGraph("sample size must be at least 1".into()));
    }
    let types = sample_types(w.partition(), k, seed);
    Ok((measure_graph_from_types(w, &types)?, types))
}

/// `G(H)`: independent weights drawn from the edge measures. With
/// `symmetric`, the weight of `{i, j}` is drawn once from `H(i, j)`, `i < j`.
/// The diagonal holds the cemetery, or stays empty if there is none.
pub fn sample_g_from_h(h: &MeasureGraph, seed: u64, symmetric: bool) -> Result<SampledGraph> {
    let n = h.n();
    let mut rng = stream(seed, STREAM_EDGES);
    let mut weights = vec![h.space().cemetery(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            rng.set_word_pos(2 * (i * n + j) as u128);
            let z = categorical(h.cell(i, j), unit(rng.next_u64()));
            weights[i * n + j] = Some(z);
            if symmetric {
                weights[j * n + i] = Some(z);
            }
        }
    }
    SampledGraph::new(h.space().clone(), n, weights, symmetric)
}

/// `G(k, W)`.
pub fn sample_g(w: &StepGraphon, k: usize, seed: u64, symmetric: bool) -> Result<SampledGraph> {
    let (h, _) = sample_h(w, k, seed)?;
    sample_g_from_h(&h, seed, symmetric)
}

/// The subgraph induced by `k` distinct uniformly chosen vertices, in the
/// order they were drawn.
pub fn subsample(g: &SampledGraph, k: usize, seed: u64) -> Result<SampledGraph> {
    if k > g.n() {
        return Err(Error::InvalidGraph(format!(
            "cannot choose {k} of {} vertices",
            g.n()
        )));
    }
    let mut rng = stream(seed, STREAM_SUBSAMPLE);
    let chosen = index::sample(&mut rng, g.n(), k).into_vec();
    Ok(g.induced(&chosen))
}

/// `W_H`: the measure graph as a stepfunction on `n` equal blocks.
pub fn measure_graph_graphon(h: &MeasureGraph) -> Result<StepGraphon> {
    let n = h.n();
    StepGraphon::new(
        h.space().clone(),
        Partition::uniform(n),
        h.cells().to_vec(),
        MeasureKind::Probability,
    )
}
