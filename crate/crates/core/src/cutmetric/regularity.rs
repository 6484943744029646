//! Weak regularity by energy increments.

use super::{cut_norm, l1_f_norm, l2_f_norm, Bound, CutWitness, Metric, SearchOptions};
use crate::error::Result;
use crate::graphon::{project_onto_classes, stepping_onto_classes, BlockPartitionMap, StepGraphon};
use crate::measures::TestFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityOptions {
    /// Stop once the witness value is at most this.
    pub tolerance: f64,
    /// Local search settings when the witness cannot be found exactly.
    pub search: SearchOptions,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        RegularityOptions {
            tolerance: 1e-12,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegularityResult {
    /// Classes of `w`'s blocks.
    pub partition: BlockPartitionMap,
    /// `w` stepped onto the classes, one block per class.
    pub stepped: StepGraphon,
    /// `||w - w_P||_{square, F}` at the final partition: exact when
    /// `error_bound` is `Exact`, a lower bound otherwise.
    pub error: f64,
    pub error_bound: Bound,
    /// `min(sqrt 2 ||D||_{2,F}, sum_n 2^-n ||D[f_n]||_1)` for `D = w - w_P`,
    /// always an upper bound on the error.
    pub certified_bound: f64,
    pub witness: CutWitness,
    pub iterations: usize,
}

/// Split every class by membership in `s` and `t`, keeping class order.
fn refine(classes: &[Vec<usize>], s: &[usize], t: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for class in classes {
        let mut parts: [Vec<usize>; 4] = Default::default();
        for &b in class {
            let key = usize::from(s.binary_search(&b).is_ok()) * 2
                + usize::from(t.binary_search(&b).is_ok());
            parts[key].push(b);
        }
        out.extend(parts.into_iter().filter(|p| !p.is_empty()));
    }
    out
}

/// Coarsen `w` onto at most `target_k` classes of its blocks.
///
/// Starting from one class, each round takes a witness `(S, T)` of
/// `||w - w_P||_{square, F}` and splits every class by `S` and `T`. When that
/// would exceed `target_k` classes it splits by `S` alone or `T` alone, and
/// it stops when no split fits or the witness value is within tolerance.
/// With exact witnesses on probability graphons the final error is at most
/// `4 / sqrt(log2 target_k)`.
pub fn weak_regularity_partition(
    w: &StepGraphon,
    target_k: usize,
    family: &TestFamily,
    opts: &RegularityOptions,
) -> Result<RegularityResult> {
    let metric = Metric::FNorm(family.clone());
    let k = w.k();
    if k <= target_k.max(1) {
        let map = BlockPartitionMap::identity(w.partition());
        let witness = CutWitness {
            rows: Vec::new(),
            cols: Vec::new(),
            signs: Vec::new(),
            value: 0.0,
        };
        return Ok(RegularityResult {
            partition: map,
            stepped: w.clone(),
            error: 0.0,
            error_bound: Bound::Exact,
            certified_bound: 0.0,
            witness,
            iterations: 0,
        });
    }
    let mut classes: Vec<Vec<usize>> = vec![(0..k).collect()];
    let mut iterations = 0;
    loop {
        let map = BlockPartitionMap::new(w.partition(), classes.clone())?;
        let residual = w.difference(&project_onto_classes(w, &map)?)?;
        let (witness, bound) = cut_norm(&residual, &metric, opts.search)?;
        // the full split, or one side of it when that would overshoot
        let next = [
            (&witness.rows, &witness.cols),
            (&witness.rows, &witness.rows),
            (&witness.cols, &witness.cols),
        ]
        .into_iter()
        .map(|(s, t)| refine(&classes, s, t))
        .find(|c| c.len() <= target_k && c.len() > classes.len());
        let next = match next {
            Some(c) if witness.value > opts.tolerance => c,
            _ => {
                let certified = (2f64.sqrt() * l2_f_norm(&residual, family)?)
                    .min(l1_f_norm(&residual, family)?);
                return Ok(RegularityResult {
                    stepped: stepping_onto_classes(w, &map)?,
                    partition: map,
                    error: witness.value,
                    error_bound: bound,
                    certified_bound: certified,
                    witness,
                    iterations,
                });
            }
        };
        classes = next;
        iterations += 1;
    }
}
