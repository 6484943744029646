//! Cut norms and cut distances of stepfunction kernels, the unlabeled
//! distance `delta`, the `<., .>_F` geometry and a weak regularity
//! partitioner.
//!
//! Every sup over measurable `S x T` is computed over unions of whole steps.
//! That is exact for norms and for quasi-convex distances such as Prohorov;
//! for other distances the scan would only be a lower bound.

mod delta;
mod heuristic;
mod regularity;
mod scan;

use serde::{Deserialize, Serialize};

pub use delta::{delta_cut, DeltaMode, DeltaOptions, DeltaResult};
pub use regularity::{weak_regularity_partition, RegularityOptions, RegularityResult};

use crate::error::{Error, Result};
use crate::graphon::{refine_common, StepGraphon};
use crate::measures::{same_space, SignedMeasure, TestFamily};
use scan::{Objective, Stack};

/// Largest (twin-compressed) block count for the exhaustive `4^k` scan.
pub const EXACT_MAX_BLOCKS: usize = 14;
/// Largest block count for the F-norm scan, which only enumerates `2^k`
/// column sets per sign pattern.
pub const FNORM_EXACT_MAX_BLOCKS: usize = 20;

/// The distance `d_m` on measures that a cut distance is built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Prohorov,
    Kr,
    Fm,
    FNorm(TestFamily),
}

impl Metric {
    pub fn is_norm(&self) -> bool {
        !matches!(self, Metric::Prohorov)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Prohorov => "prohorov",
            Metric::Kr => "kr",
            Metric::Fm => "fm",
            Metric::FNorm(_) => "fnorm",
        }
    }

    /// `d_m(mu, nu)` on single measures.
    pub fn distance(&self, mu: &SignedMeasure, nu: &SignedMeasure) -> Result<f64> {
        match self {
            Metric::Prohorov => crate::measures::prohorov(mu, nu),
            _ => self.norm(&mu.sub(nu)?),
        }
    }

    pub fn norm(&self, mu: &SignedMeasure) -> Result<f64> {
        match self {
            Metric::Prohorov => Err(Error::UnsupportedMetric("prohorov is not a norm".into())),
            Metric::Kr => crate::measures::kr_norm(mu),
            Metric::Fm => crate::measures::fm_norm(mu),
            Metric::FNorm(fam) => crate::measures::f_norm(mu, fam),
        }
    }

    fn limit(&self) -> usize {
        match self {
            Metric::FNorm(_) => FNORM_EXACT_MAX_BLOCKS,
            _ => EXACT_MAX_BLOCKS,
        }
    }
}

/// Whether a reported value is exact or a bound in a known direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    /// The true value is at least the reported one.
    Lower,
    /// The true value is at most the reported one.
    Upper,
    /// Neither direction is guaranteed.
    Estimate,
}

/// A maximizing rectangle `S x T` given by block indices, with the sign
/// pattern over the test family when the metric is an F-norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(default)]
    pub signs: Vec<i8>,
    pub value: f64,
}

/// Knobs for the local search used when exact scans are too large.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 16,
            seed: 0,
        }
    }
}

fn check_family(d: &StepGraphon, metric: &Metric) -> Result<()> {
    if let Metric::FNorm(fam) = metric {
        if !same_space(fam.space(), d.space()) {
            return Err(Error::SpaceMismatch);
        }
    }
    Ok(())
}

fn require_norm(metric: &Metric) -> Result<()> {
    if metric.is_norm() {
        Ok(())
    } else {
        Err(Error::UnsupportedMetric(
            "cut norms need KR, FM or an F-norm".into(),
        ))
    }
}

fn too_large(k: usize, limit: usize) -> Error {
    Error::CapabilityLimit {
        what: "exact cut scan",
        size: k as u128,
        limit: limit as u128,
        hint: "use the heuristic mode, which returns a lower bound",
    }
}

fn finish(
    stack: &Stack,
    objective: &Objective,
    rows: &[usize],
    cols: &[usize],
) -> Result<CutWitness> {
    let acc = stack.accumulate(rows, cols);
    let value = objective.eval(&acc)?;
    let signs = objective.signs(&acc);
    Ok(CutWitness {
        rows: stack.expand(rows),
        cols: stack.expand(cols),
        signs,
        value,
    })
}

fn exact_on(stack: &Stack, objective: &Objective, limit: usize) -> Result<CutWitness> {
    if stack.k > limit {
        return Err(too_large(stack.k, limit));
    }
    let (rows, cols) = match objective {
        Objective::Family(fam) => scan::family_scan(stack, fam, fam.len()),
        _ => {
            let floor = heuristic::search(
                stack,
                objective,
                SearchOptions {
                    restarts: 4,
                    seed: 0,
                },
            )?
            .value;
            scan::generic_scan(stack, objective, floor)?
        }
    };
    finish(stack, objective, &rows, &cols)
}

/// `||d||_{square, m}` by exhaustive search over unions of steps.
///
/// Twin blocks are merged first, so the limit applies to the number of
/// distinct rows.
pub fn cut_norm_exact(d: &StepGraphon, metric: &Metric) -> Result<CutWitness> {
    require_norm(metric)?;
    check_family(d, metric)?;
    let stack = Stack::new(&[d]);
    let objective = Objective::new(metric, d.space(), false)?;
    exact_on(&stack, &objective, metric.limit())
}

/// F-norm cut norm using only the first `terms` test functions.
pub fn cut_norm_truncated(
    d: &StepGraphon,
    family: &TestFamily,
    terms: usize,
) -> Result<CutWitness> {
    check_family(d, &Metric::FNorm(family.clone()))?;
    let terms = terms.clamp(1, family.len());
    let stack = Stack::new(&[d]);
    if stack.k > FNORM_EXACT_MAX_BLOCKS {
        return Err(too_large(stack.k, FNORM_EXACT_MAX_BLOCKS));
    }
    let (rows, cols) = scan::family_scan(&stack, family, terms);
    let acc = stack.accumulate(&rows, &cols);
    let value = family.project(&acc)[..terms]
        .iter()
        .enumerate()
        .map(|(n, v)| TestFamily::weight(n) * v.abs())
        .sum();
    let signs = family.project(&acc)[..terms]
        .iter()
        .map(|&v| if v < 0.0 { -1 } else { 1 })
        .collect();
    Ok(CutWitness {
        rows: stack.expand(&rows),
        cols: stack.expand(&cols),
        signs,
        value,
    })
}

/// Best rectangle found by local search; its value is a lower bound on the
/// cut norm. Deterministic for a fixed seed.
pub fn cut_norm_heuristic(
    d: &StepGraphon,
    metric: &Metric,
    opts: SearchOptions,
) -> Result<CutWitness> {
    require_norm(metric)?;
    check_family(d, metric)?;
    let stack = Stack::new(&[d]);
    let objective = Objective::new(metric, d.space(), false)?;
    let found = heuristic::search(&stack, &objective, opts)?;
    finish(&stack, &objective, &found.rows, &found.cols)
}

fn pair_stack(u: &StepGraphon, w: &StepGraphon, metric: &Metric) -> Result<(Stack, Objective)> {
    Ok((
        Stack::new(&[u, w]),
        Objective::new(metric, u.space(), true)?,
    ))
}

/// `d_{square, m}(u, w)`, exact.
pub fn cut_dist_exact(u: &StepGraphon, w: &StepGraphon, metric: &Metric) -> Result<CutWitness> {
    let (u, w) = refine_common(u, w)?;
    check_family(&u, metric)?;
    if metric.is_norm() {
        return cut_norm_exact(&u.difference(&w)?, metric);
    }
    let (stack, objective) = pair_stack(&u, &w, metric)?;
    exact_on(&stack, &objective, EXACT_MAX_BLOCKS)
}

/// Local-search lower bound on `d_{square, m}(u, w)`.
pub fn cut_dist_heuristic(
    u: &StepGraphon,
    w: &StepGraphon,
    metric: &Metric,
    opts: SearchOptions,
) -> Result<CutWitness> {
    let (u, w) = refine_common(u, w)?;
    check_family(&u, metric)?;
    if metric.is_norm() {
        return cut_norm_heuristic(&u.difference(&w)?, metric, opts);
    }
    let (stack, objective) = pair_stack(&u, &w, metric)?;
    let found = heuristic::search(&stack, &objective, opts)?;
    finish(&stack, &objective, &found.rows, &found.cols)
}

/// Exact when the compressed size allows it, otherwise a lower bound.
pub fn cut_dist(
    u: &StepGraphon,
    w: &StepGraphon,
    metric: &Metric,
    opts: SearchOptions,
) -> Result<(CutWitness, Bound)> {
    match cut_dist_exact(u, w, metric) {
        Ok(wit) => Ok((wit, Bound::Exact)),
        Err(e) if e.is_capability_limit() => {
            Ok((cut_dist_heuristic(u, w, metric, opts)?, Bound::Lower))
        }
        Err(e) => Err(e),
    }
}

/// [`cut_dist`] for a single kernel.
pub fn cut_norm(
    d: &StepGraphon,
    metric: &Metric,
    opts: SearchOptions,
) -> Result<(CutWitness, Bound)> {
    match cut_norm_exact(d, metric) {
        Ok(wit) => Ok((wit, Bound::Exact)),
        Err(e) if e.is_capability_limit() => {
            Ok((cut_norm_heuristic(d, metric, opts)?, Bound::Lower))
        }
        Err(e) => Err(e),
    }
}

/// The cut objective at a given rectangle: `d_m(U(S x T), W(S x T))`, or the
/// norm of `U(S x T)` when `w` is `None`.
pub fn cut_objective(
    u: &StepGraphon,
    w: Option<&StepGraphon>,
    metric: &Metric,
    rows: &[usize],
    cols: &[usize],
) -> Result<f64> {
    let k = u.k();
    if rows.iter().chain(cols).any(|&i| i >= k) {
        return Err(Error::InvalidPartition(format!(
            "witness index out of range for {k} blocks"
        )));
    }
    let lam = u.partition().lengths_f64();
    let total = |g: &StepGraphon| -> Vec<f64> {
        let mut acc = vec![0.0; g.m()];
        for &i in rows {
            for &j in cols {
                for (a, x) in acc.iter_mut().zip(g.cell(i, j)) {
                    *a += lam[i] * lam[j] * x;
                }
            }
        }
        acc
    };
    let a = SignedMeasure::new(u.space().clone(), total(u))?;
    match w {
        None => metric.norm(&a),
        Some(w) => {
            if w.partition() != u.partition() {
                return Err(Error::InvalidPartition(
                    "witness evaluation needs identical partitions".into(),
                ));
            }
            let b = SignedMeasure::new(w.space().clone(), total(w))?;
            metric.distance(&a, &b)
        }
    }
}

/// `<u, w>_F = sum_n 2^-n <u[f_n], w[f_n]>`.
pub fn f_inner_product(u: &StepGraphon, w: &StepGraphon, family: &TestFamily) -> Result<f64> {
    let (u, w) = refine_common(u, w)?;
    check_family(&u, &Metric::FNorm(family.clone()))?;
    let lam = u.partition().lengths_f64();
    let k = u.k();
    let mut total = 0.0;
    for (n, f) in family.functions().iter().enumerate() {
        let uf = u.integrate(f);
        let wf = w.integrate(f);
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += lam[i] * lam[j] * uf[i * k + j] * wf[i * k + j];
            }
        }
        total += TestFamily::weight(n) * s;
    }
    Ok(total)
}

/// `||w||_{2, F}`.
pub fn l2_f_norm(w: &StepGraphon, family: &TestFamily) -> Result<f64> {
    Ok(f_inner_product(w, w, family)?.max(0.0).sqrt())
}

/// `sum_n 2^-n ||d[f_n]||_1`, an upper bound on the F-norm cut norm.
pub fn l1_f_norm(d: &StepGraphon, family: &TestFamily) -> Result<f64> {
    check_family(d, &Metric::FNorm(family.clone()))?;
    let lam = d.partition().lengths_f64();
    let k = d.k();
    let mut total = 0.0;
    for (n, f) in family.functions().iter().enumerate() {
        let df = d.integrate(f);
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += lam[i] * lam[j] * df[i * k + j].abs();
            }
        }
        total += TestFamily::weight(n) * s;
    }
    Ok(total)
}

#[cfg(test)]
mod tests;
