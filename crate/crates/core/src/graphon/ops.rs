use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::StepGraphon;
use crate::error::{Error, Result};
use crate::graphs::SampledGraph;
use crate::measures::{same_space, MeasureKind, SignedMeasure, WeightSpace};
use crate::partition::{to_f64, Partition, Rational};

/// A grouping of the blocks of a partition into coarser classes. Classes need
/// not be contiguous; each lists its fine blocks with their lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartitionMap {
    assignment: Vec<Vec<(usize, Rational)>>,
}

impl BlockPartitionMap {
    pub fn new(fine: &Partition, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; fine.len()];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::InvalidPartition(
                    "empty class in block grouping".into(),
                ));
            }
            for &b in class {
                if b >= fine.len() || seen[b] {
                    return Err(Error::InvalidPartition(format!(
                        "block {b} missing, repeated or out of range"
                    )));
                }
                seen[b] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition(
                "grouping does not cover every block".into(),
            ));
        }
        let assignment = classes
            .into_iter()
            .map(|c| c.into_iter().map(|b| (b, fine.lengths()[b])).collect())
            .collect();
        Ok(BlockPartitionMap { assignment })
    }

    /// Every block in its own class.
    pub fn identity(fine: &Partition) -> Self {
        BlockPartitionMap::new(fine, (0..fine.len()).map(|b| vec![b]).collect())
            .expect("identity grouping")
    }

    /// All blocks in one class.
    pub fn trivial(fine: &Partition) -> Self {
        BlockPartitionMap::new(fine, vec![(0..fine.len()).collect()]).expect("trivial grouping")
    }

    pub fn target_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[Vec<(usize, Rational)>] {
        &self.assignment
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        self.assignment
            .iter()
            .map(|c| c.iter().map(|(b, _)| *b).collect())
            .collect()
    }

    pub fn class_lengths(&self) -> Vec<Rational> {
        self.assignment
            .iter()
            .map(|c| c.iter().map(|(_, l)| *l).sum())
            .collect()
    }

    /// Class index of every fine block.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.assignment.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (c, class) in self.assignment.iter().enumerate() {
            for (b, _) in class {
                out[*b] = c;
            }
        }
        out
    }
}

/// Average `w` over groups of its blocks. `groups[c]` lists `(block, weight)`
/// pairs whose weights are the block's share of the group's length.
fn average(w: &StepGraphon, groups: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let m = w.m();
    let k = groups.len();
    let mut out = vec![0.0; k * k * m];
    for (ci, gi) in groups.iter().enumerate() {
        for (cj, gj) in groups.iter().enumerate() {
            let dst = &mut out[(ci * k + cj) * m..(ci * k + cj + 1) * m];
            for &(a, alpha) in gi {
                for &(b, beta) in gj {
                    let wt = alpha * beta;
                    for (d, s) in dst.iter_mut().zip(w.cell(a, b)) {
                        *d += wt * s;
                    }
                }
            }
        }
    }
    out
}

fn stepped_kind(w: &StepGraphon) -> MeasureKind {
    w.kind()
}

/// The stepping `W_P` onto an interval partition `target`.
///
/// Both partitions are overlaid first; the value on `S_I x S_J` is the
/// length-weighted average of the covered fine cells.
pub fn stepping(w: &StepGraphon, target: &Partition) -> Result<StepGraphon> {
    let ov = w.partition().overlay(target);
    let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); target.len()];
    for (piece, len) in ov.partition.lengths().iter().enumerate() {
        let t = ov.right[piece];
        let share = *len / target.lengths()[t];
        let src = ov.left[piece];
        // merge pieces of the same source block inside one target block
        match groups[t].iter_mut().find(|(b, _)| *b == src) {
            Some(entry) => entry.1 += to_f64(&share),
            None => groups[t].push((src, to_f64(&share))),
        }
    }
    let cells = average(w, &groups);
    StepGraphon::new(w.space().clone(), target.clone(), cells, stepped_kind(w))
}

fn class_groups(w: &StepGraphon, map: &BlockPartitionMap) -> Result<Vec<Vec<(usize, f64)>>> {
    let covered: usize = map.assignment().iter().map(Vec::len).sum();
    if covered != w.k()
        || map
            .assignment()
            .iter()
            .flatten()
            .any(|(b, l)| *b >= w.k() || w.partition().lengths()[*b] != *l)
    {
        return Err(Error::InvalidPartition(
            "grouping does not match the graphon's blocks".into(),
        ));
    }
    Ok(map
        .assignment()
        .iter()
        .zip(map.class_lengths())
        .map(|(class, total)| {
            class
                .iter()
                .map(|(b, l)| (*b, to_f64(&(*l / total))))
                .collect()
        })
        .collect())
}

/// Stepping onto a grouping of the blocks; the result has one block per
/// class, in class order (a relabeling of `W_P` when classes are not
/// contiguous).
pub fn stepping_onto_classes(w: &StepGraphon, map: &BlockPartitionMap) -> Result<StepGraphon> {
    let groups = class_groups(w, map)?;
    let cells = average(w, &groups);
    StepGraphon::new(
        w.space().clone(),
        Partition::new(map.class_lengths())?,
        cells,
        stepped_kind(w),
    )
}

/// `W_P` for a grouping, expressed on `w`'s own partition.
pub fn project_onto_classes(w: &StepGraphon, map: &BlockPartitionMap) -> Result<StepGraphon> {
    let groups = class_groups(w, map)?;
    let coarse = average(w, &groups);
    let class_of = map.class_of();
    let (k, c, m) = (w.k(), map.target_count(), w.m());
    let mut cells = Vec::with_capacity(k * k * m);
    for i in 0..k {
        for j in 0..k {
            let off = (class_of[i] * c + class_of[j]) * m;
            cells.extend_from_slice(&coarse[off..off + m]);
        }
    }
    StepGraphon::new(
        w.space().clone(),
        w.partition().clone(),
        cells,
        stepped_kind(w),
    )
}

/// Copy the values of `w` onto a refinement of its partition.
pub fn refine_to(w: &StepGraphon, finer: &Partition) -> Result<StepGraphon> {
    if !finer.refines(w.partition()) {
        return Err(Error::InvalidPartition(
            "target does not refine the graphon's partition".into(),
        ));
    }
    let ov = finer.overlay(w.partition());
    let src = ov.right;
    let (k, m) = (finer.len(), w.m());
    let mut cells = Vec::with_capacity(k * k * m);
    for i in 0..k {
        for j in 0..k {
            cells.extend_from_slice(w.cell(src[i], src[j]));
        }
    }
    StepGraphon::new(w.space().clone(), finer.clone(), cells, w.kind())
}

/// Both kernels copied onto the overlay of their partitions.
pub fn refine_common(u: &StepGraphon, w: &StepGraphon) -> Result<(StepGraphon, StepGraphon)> {
    if !same_space(u.space(), w.space()) {
        return Err(Error::SpaceMismatch);
    }
    if u.partition() == w.partition() {
        return Ok((u.clone(), w.clone()));
    }
    let common = u.partition().overlay(w.partition()).partition;
    Ok((refine_to(u, &common)?, refine_to(w, &common)?))
}

/// `W^sigma` with `W^sigma(i, j) = W(sigma(i), sigma(j))`; `sigma` may only
/// exchange blocks of equal length.
pub fn relabel(w: &StepGraphon, sigma: &[usize]) -> Result<StepGraphon> {
    let k = w.k();
    if sigma.len() != k {
        return Err(Error::InvalidPermutation(format!(
            "expected {k} entries, got {}",
            sigma.len()
        )));
    }
    let mut seen = vec![false; k];
    for &s in sigma {
        if s >= k || seen[s] {
            return Err(Error::InvalidPermutation(format!(
                "{sigma:?} is not a permutation"
            )));
        }
        seen[s] = true;
    }
    let lengths = w.partition().lengths();
    if let Some(i) = (0..k).find(|&i| lengths[i] != lengths[sigma[i]]) {
        return Err(Error::InvalidPermutation(format!(
            "block {i} and block {} have different lengths",
            sigma[i]
        )));
    }
    let m = w.m();
    let mut cells = Vec::with_capacity(k * k * m);
    for i in 0..k {
        for j in 0..k {
            cells.extend_from_slice(w.cell(sigma[i], sigma[j]));
        }
    }
    StepGraphon::new(w.space().clone(), w.partition().clone(), cells, w.kind())
}

/// For each of the `count` equal blocks, the block of `partition` it
/// comes from.
pub fn equipartition_sources(partition: &Partition, count: usize) -> Result<Vec<usize>> {
    if count == 0 {
        return Err(Error::InvalidPartition(
            "equipartition needs at least one block".into(),
        ));
    }
    let mut sources = Vec::with_capacity(count);
    for (b, len) in partition.lengths().iter().enumerate() {
        let pieces = *len * Rational::from_integer(count as i128);
        if !pieces.is_integer() {
            return Err(Error::InvalidPartition(format!(
                "{count} is not a common denominator of the block lengths"
            )));
        }
        sources.extend(std::iter::repeat_n(b, pieces.to_integer() as usize));
    }
    Ok(sources)
}

/// Split every block into pieces of length `1 / count`.
pub fn equipartition(w: &StepGraphon, count: usize) -> Result<StepGraphon> {
    let src = equipartition_sources(w.partition(), count)?;
    let m = w.m();
    let mut cells = Vec::with_capacity(count * count * m);
    for &a in &src {
        for &b in &src {
            cells.extend_from_slice(w.cell(a, b));
        }
    }
    StepGraphon::new(
        w.space().clone(),
        Partition::uniform(count),
        cells,
        w.kind(),
    )
}

/// `W_G`: `n` equal blocks with the Dirac mass at the weight of each edge;
/// missing edges and the diagonal carry the cemetery point.
pub fn from_weighted_graph(g: &SampledGraph) -> Result<StepGraphon> {
    let n = g.n();
    let m = g.space().len();
    let mut cells = vec![0.0; n * n * m];
    for i in 0..n {
        for j in 0..n {
            let z = g.weight_or_cemetery(i, j)?;
            cells[(i * n + j) * m + z] = 1.0;
        }
    }
    StepGraphon::new(
        g.space().clone(),
        Partition::uniform(n),
        cells,
        MeasureKind::Probability,
    )
}

/// `M_W = sum_{i,j} lambda_i lambda_j |W(i, j)|`.
pub fn marginal_measure(w: &StepGraphon) -> SignedMeasure {
    let lam = w.partition().lengths_f64();
    let m = w.m();
    let mut mass = vec![0.0; m];
    for i in 0..w.k() {
        for j in 0..w.k() {
            let wt = lam[i] * lam[j];
            for (acc, x) in mass.iter_mut().zip(w.cell(i, j)) {
                *acc += wt * x.abs();
            }
        }
    }
    SignedMeasure::new(w.space().clone(), mass).expect("finite masses")
}

/// The probability-graphon `w delta_1 + (1 - w) delta_0` of a real kernel
/// with values in `[0, 1]`, on a two-point space whose points 0 and 1 stand
/// for the values 0 and 1.
pub fn embed_real_graphon(
    space: Arc<WeightSpace>,
    values: &[Vec<f64>],
    partition: Partition,
) -> Result<StepGraphon> {
    if space.len() != 2 {
        return Err(Error::InvalidSpace(
            "real-valued graphons embed into a two-point space".into(),
        ));
    }
    let k = partition.len();
    if values.len() != k || values.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidGraphon(format!("expected a {k}x{k} matrix")));
    }
    if values.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidGraphon(
            "real graphon values must lie in [0, 1]".into(),
        ));
    }
    StepGraphon::from_fn(space, partition, MeasureKind::Probability, |i, j| {
        vec![1.0 - values[i][j], values[i][j]]
    })
}

/// Merge twin blocks (identical rows and columns). The merged kernel is a
/// relabeling of `w` adapted to a coarser partition, so cut norms and
/// homomorphism densities are unchanged. Returns the class of each block.
pub fn compress(w: &StepGraphon) -> (StepGraphon, Vec<usize>) {
    let k = w.k();
    let m = w.m();
    let signature = |i: usize| -> Vec<u64> {
        let mut sig = Vec::with_capacity(2 * k * m);
        for j in 0..k {
            sig.extend(w.cell(i, j).iter().map(|x| x.to_bits()));
            sig.extend(w.cell(j, i).iter().map(|x| x.to_bits()));
        }
        sig
    };
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![0; k];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    for i in 0..k {
        let sig = signature(i);
        let c = *index.entry(sig).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
        class_of[i] = c;
    }
    if reps.len() == k {
        return (w.clone(), class_of);
    }
    let mut lengths = vec![Rational::zero(); reps.len()];
    for (i, &c) in class_of.iter().enumerate() {
        lengths[c] += w.partition().lengths()[i];
    }
    let mut cells = Vec::with_capacity(reps.len() * reps.len() * m);
    for &a in &reps {
        for &b in &reps {
            cells.extend_from_slice(w.cell(a, b));
        }
    }
    let merged = StepGraphon::new(
        w.space().clone(),
        Partition::new(lengths).expect("merged lengths sum to one"),
        cells,
        w.kind(),
    )
    .expect("cells copied from a valid graphon");
    (merged, class_of)
}
