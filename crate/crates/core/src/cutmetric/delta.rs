//! The unlabeled cut distance over block relabelings at a fixed
//! equipartition granularity.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cut_dist, Bound, Metric, SearchOptions};
use crate::error::{Error, Result};
use crate::graphon::{equipartition, relabel, StepGraphon};

/// Largest granularity for the exhaustive permutation search.
pub const BRUTE_MAX_BLOCKS: usize = 8;

const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    Brute,
    Anneal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaOptions {
    pub mode: DeltaMode,
    pub granularity: usize,
    pub seed: u64,
    /// Used for the inner cut distance when it is too large to scan.
    pub search: SearchOptions,
    /// Starting permutation for annealing (identity if absent).
    pub initial: Option<Vec<usize>>,
}

impl DeltaOptions {
    pub fn brute(granularity: usize) -> Self {
        DeltaOptions {
            mode: DeltaMode::Brute,
            granularity,
            seed: 0,
            search: SearchOptions::default(),
            initial: None,
        }
    }

    pub fn anneal(granularity: usize, seed: u64) -> Self {
        DeltaOptions {
            mode: DeltaMode::Anneal,
            granularity,
            seed,
            search: SearchOptions::default(),
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub value: f64,
    /// `sigma` minimizing `d(u, w^sigma)` with `w^sigma(i, j) = w(sigma i, sigma j)`.
    pub permutation: Vec<usize>,
    /// `Upper` when every inner distance was exact.
    pub bound: Bound,
    pub evaluations: usize,
}

struct Inner<'a> {
    u: StepGraphon,
    w: StepGraphon,
    metric: &'a Metric,
    search: SearchOptions,
}

impl Inner<'_> {
    fn eval(&self, sigma: &[usize]) -> Result<(f64, Bound)> {
        let (wit, bound) = cut_dist(&self.u, &relabel(&self.w, sigma)?, self.metric, self.search)?;
        Ok((wit.value, bound))
    }
}

fn combine(bound: Bound, inner: Bound) -> Bound {
    if bound == Bound::Upper && inner == Bound::Exact {
        Bound::Upper
    } else {
        Bound::Estimate
    }
}

/// The `index`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut index: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<usize> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    let mut out = Vec::with_capacity(n);
    for pos in (0..n).rev() {
        let q = index / fact[pos];
        index %= fact[pos];
        out.push(pool.remove(q));
    }
    out
}

/// `min_sigma d_{square, m}(u, w^sigma)` over permutations of `L` equal
/// blocks.
///
/// Both kernels are equipartitioned to `L = opts.granularity` blocks first.
/// The result bounds the unlabeled distance from above. Brute force is the
/// exact optimum at this granularity; annealing returns the best
/// permutation it visits, and refining `L` is not guaranteed to improve it.
pub fn delta_cut(
    u: &StepGraphon,
    w: &StepGraphon,
    metric: &Metric,
    opts: &DeltaOptions,
) -> Result<DeltaResult> {
    let l = opts.granularity;
    let inner = Inner {
        u: equipartition(u, l)?,
        w: equipartition(w, l)?,
        metric,
        search: opts.search,
    };
    match opts.mode {
        DeltaMode::Brute => brute(&inner, l),
        DeltaMode::Anneal => anneal(&inner, l, opts),
    }
}

fn brute(inner: &Inner, l: usize) -> Result<DeltaResult> {
    if l > BRUTE_MAX_BLOCKS {
        return Err(Error::CapabilityLimit {
            what: "permutation search",
            size: l as u128,
            limit: BRUTE_MAX_BLOCKS as u128,
            hint: "use anneal mode",
        });
    }
    let total: usize = (1..=l).product();
    let results: Vec<Result<(f64, Bound)>> = (0..total)
        .into_par_iter()
        .map(|idx| inner.eval(&nth_permutation(l, idx)))
        .collect();
    let mut best = (f64::INFINITY, 0usize);
    let mut bound = Bound::Upper;
    for (idx, r) in results.into_iter().enumerate() {
        let (v, b) = r?;
        bound = combine(bound, b);
        if v < best.0 - TIE {
            best = (v, idx);
        }
    }
    Ok(DeltaResult {
        value: best.0,
        permutation: nth_permutation(l, best.1),
        bound,
        evaluations: total,
    })
}

fn anneal(inner: &Inner, l: usize, opts: &DeltaOptions) -> Result<DeltaResult> {
    let mut current: Vec<usize> = match &opts.initial {
        Some(p) => {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..l).collect::<Vec<_>>() {
                return Err(Error::InvalidPermutation(format!(
                    "{p:?} is not a permutation of {l} blocks"
                )));
            }
            p.clone()
        }
        None => (0..l).collect(),
    };
    let mut cache: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut bound = Bound::Upper;
    let mut eval = |sigma: &Vec<usize>, bound: &mut Bound| -> Result<f64> {
        if let Some(&v) = cache.get(sigma) {
            return Ok(v);
        }
        let (v, b) = inner.eval(sigma)?;
        *bound = combine(*bound, b);
        cache.insert(sigma.clone(), v);
        Ok(v)
    };
    let mut value = eval(&current, &mut bound)?;
    let mut best = (value, current.clone());
    let mut temperature = value;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if l >= 2 {
        for _ in 0..200 * l {
            if best.0 <= 0.0 {
                break;
            }
            let a = rng.gen_range(0..l);
            let mut b = rng.gen_range(0..l - 1);
            if b >= a {
                b += 1;
            }
            let mut next = current.clone();
            next.swap(a, b);
            let v = eval(&next, &mut bound)?;
            let accept = v <= value
                || (temperature > 0.0 && rng.gen::<f64>() < (-(v - value) / temperature).exp());
            if accept {
                current = next;
                value = v;
                if value < best.0 - TIE {
                    best = (value, current.clone());
                }
            }
            temperature *= 0.97;
        }
    }
    Ok(DeltaResult {
        value: best.0,
        permutation: best.1,
        bound,
        evaluations: cache.len(),
    })
}
