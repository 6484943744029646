//! Exhaustive searches over unions of steps.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::Metric;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::measures::{DualProgram, ProhorovPlan, TestFamily, WeightSpace};

const TIE: f64 = 1e-12;

/// One or two kernels on a common partition, twin blocks merged and cells
/// prescaled by `lambda_i lambda_j`. Cells of the two kernels are
/// concatenated, so each cell has `width = q * m` entries.
pub(crate) struct Stack {
    pub k: usize,
    pub width: usize,
    pub cells: Vec<f64>,
    // original blocks of each merged block
    members: Vec<Vec<usize>>,
}

impl Stack {
    pub fn new(kernels: &[&StepGraphon]) -> Stack {
        let first = kernels[0];
        let (k0, m) = (first.k(), first.m());
        let width = m * kernels.len();
        let raw = |i: usize, j: usize| {
            kernels
                .iter()
                .flat_map(move |g| g.cell(i, j).iter().copied())
        };
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..k0 {
            let mut sig = Vec::with_capacity(2 * k0 * width);
            for j in 0..k0 {
                sig.extend(raw(i, j).map(f64::to_bits));
                sig.extend(raw(j, i).map(f64::to_bits));
            }
            let next = members.len();
            let c = *index.entry(sig).or_insert(next);
            if c == next {
                members.push(Vec::new());
            }
            members[c].push(i);
        }
        let lam0 = first.partition().lengths();
        let lam: Vec<f64> = members
            .iter()
            .map(|c| crate::partition::to_f64(&c.iter().map(|&b| lam0[b]).sum()))
            .collect();
        let k = members.len();
        let mut cells = Vec::with_capacity(k * k * width);
        for a in 0..k {
            for b in 0..k {
                let w = lam[a] * lam[b];
                cells.extend(raw(members[a][0], members[b][0]).map(|x| w * x));
            }
        }
        Stack {
            k,
            width,
            cells,
            members,
        }
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let off = (i * self.k + j) * self.width;
        &self.cells[off..off + self.width]
    }

    pub fn accumulate(&self, rows: &[usize], cols: &[usize]) -> Vec<f64> {
        let mut acc = vec![0.0; self.width];
        for &i in rows {
            for &j in cols {
                for (a, x) in acc.iter_mut().zip(self.cell(i, j)) {
                    *a += x;
                }
            }
        }
        acc
    }

    /// Original block indices covered by merged blocks, sorted.
    pub fn expand(&self, merged: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = merged
            .iter()
            .flat_map(|&c| self.members[c].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// The function of the accumulated rectangle mass that is maximized.
pub(crate) enum Objective {
    Family(Arc<TestFamily>),
    Dual(DualProgram),
    Prohorov(ProhorovPlan, usize),
}

impl Objective {
    pub fn new(metric: &Metric, space: &Arc<WeightSpace>, pair: bool) -> Result<Objective> {
        Ok(match (metric, pair) {
            (Metric::Prohorov, true) => Objective::Prohorov(ProhorovPlan::new(space)?, space.len()),
            (Metric::Prohorov, false) => {
                return Err(Error::UnsupportedMetric("prohorov is not a norm".into()));
            }
            (_, true) => {
                return Err(Error::UnsupportedMetric(
                    "norm distances are computed on differences".into(),
                ))
            }
            (Metric::Kr, false) => Objective::Dual(DualProgram::kantorovich_rubinstein(space)),
            (Metric::Fm, false) => Objective::Dual(DualProgram::fortet_mourier(space)),
            (Metric::FNorm(fam), false) => Objective::Family(Arc::new(fam.clone())),
        })
    }

    pub fn eval(&self, acc: &[f64]) -> Result<f64> {
        Ok(match self {
            Objective::Family(fam) => fam.norm_of(acc),
            Objective::Dual(lp) => lp.solve(acc)?.0,
            Objective::Prohorov(plan, m) => plan.distance(&acc[..*m], &acc[*m..]),
        })
    }

    /// Cheap upper bound on [`Objective::eval`].
    pub fn upper(&self, acc: &[f64]) -> f64 {
        match self {
            Objective::Family(fam) => fam.norm_of(acc),
            Objective::Dual(_) => acc.iter().map(|x| x.abs()).sum(),
            Objective::Prohorov(_, m) => {
                let (u, w) = acc.split_at(*m);
                let (mut pos, mut neg) = (0.0, 0.0);
                for (a, b) in u.iter().zip(w) {
                    let d = a - b;
                    if d > 0.0 {
                        pos += d;
                    } else {
                        neg -= d;
                    }
                }
                let mass = u.iter().sum::<f64>().max(w.iter().sum());
                f64::max(pos, neg).min(mass)
            }
        }
    }

    /// A linear functional `g` with `<g, acc> = eval(acc)` and
    /// `<g, x> <= eval(x)` everywhere, when one exists.
    pub fn dual(&self, acc: &[f64]) -> Result<Option<Vec<f64>>> {
        Ok(match self {
            Objective::Family(fam) => Some(fam.signed_combination(&self.signs(acc))),
            Objective::Dual(lp) => Some(lp.solve(acc)?.1),
            Objective::Prohorov(..) => None,
        })
    }

    pub fn signs(&self, acc: &[f64]) -> Vec<i8> {
        match self {
            Objective::Family(fam) => fam
                .project(acc)
                .iter()
                .map(|&v| if v < 0.0 { -1 } else { 1 })
                .collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    rows: u32,
    cols: u32,
}

impl Best {
    const EMPTY: Best = Best {
        value: 0.0,
        rows: 0,
        cols: 0,
    };

    fn beats(&self, other: &Best) -> bool {
        self.value > other.value + TIE
            || (self.value >= other.value - TIE
                && (self.rows, self.cols) < (other.rows, other.cols))
    }

    fn offer(&mut self, cand: Best) {
        if cand.beats(self) {
            *self = cand;
        }
    }
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

fn chunks(total: usize, pieces: usize) -> Vec<(usize, usize)> {
    let pieces = pieces.clamp(1, total.max(1));
    (0..pieces)
        .map(|p| (p * total / pieces, (p + 1) * total / pieces))
        .collect()
}

/// Maximize the objective over all `4^k` row and column sets.
///
/// `floor` is a value known to be attained; rectangles whose cheap upper
/// bound is below it are skipped.
pub(crate) fn generic_scan(
    stack: &Stack,
    obj: &Objective,
    floor: f64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let (k, width) = (stack.k, stack.width);
    let full = 1usize << k;
    let floor = floor - 1e-9;
    let parts: Vec<Result<Best>> = chunks(full, 256)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut best = Best::EMPTY;
            let mut rowsum = vec![0.0; k * width];
            let mut acc = vec![0.0; width];
            for rows in lo..hi {
                if rows == 0 {
                    continue;
                }
                rowsum.iter_mut().for_each(|x| *x = 0.0);
                for i in indices(rows as u32) {
                    for j in 0..k {
                        for (r, x) in rowsum[j * width..(j + 1) * width]
                            .iter_mut()
                            .zip(stack.cell(i, j))
                        {
                            *r += x;
                        }
                    }
                }
                acc.iter_mut().for_each(|x| *x = 0.0);
                let mut cols = 0u32;
                for t in 1..full {
                    let bit = t.trailing_zeros() as usize;
                    cols ^= 1 << bit;
                    let col = &rowsum[bit * width..(bit + 1) * width];
                    if cols >> bit & 1 == 1 {
                        acc.iter_mut().zip(col).for_each(|(a, x)| *a += x);
                    } else {
                        acc.iter_mut().zip(col).for_each(|(a, x)| *a -= x);
                    }
                    if obj.upper(&acc) < best.value.max(floor) - TIE {
                        continue;
                    }
                    let value = obj.eval(&acc)?;
                    best.offer(Best {
                        value,
                        rows: rows as u32,
                        cols,
                    });
                }
            }
            Ok(best)
        })
        .collect();
    let mut best = Best::EMPTY;
    for p in parts {
        best.offer(p?);
    }
    Ok((indices(best.rows), indices(best.cols)))
}

/// F-norm scan. For a sign pattern `eps` the objective is linear,
/// `sum_{I x J} B_eps`, so for each column set the best row set is read off
/// the signs of the row sums. Maximizing over `eps` (with `eps_0 = +1` and
/// both orientations of each row set) gives the norm.
pub(crate) fn family_scan(
    stack: &Stack,
    fam: &TestFamily,
    terms: usize,
) -> (Vec<usize>, Vec<usize>) {
    let k = stack.k;
    let full = 1usize << k;
    // proj[(i * k + j) * terms + n] = <f_n, cell(i, j)>
    let mut proj = Vec::with_capacity(k * k * terms);
    for i in 0..k {
        for j in 0..k {
            let c = stack.cell(i, j);
            proj.extend(
                fam.functions()[..terms]
                    .iter()
                    .map(|f| f.iter().zip(c).map(|(a, b)| a * b).sum::<f64>()),
            );
        }
    }
    let patterns = 1usize << (terms - 1);
    let spans = chunks(full, (256 / patterns).max(1));
    let tasks: Vec<(usize, (usize, usize))> = (0..patterns)
        .flat_map(|e| spans.iter().map(move |&s| (e, s)))
        .collect();
    let parts: Vec<Best> = tasks
        .into_par_iter()
        .map(|(e, (lo, hi))| {
            let b: Vec<f64> = (0..k * k)
                .map(|c| {
                    (0..terms)
                        .map(|n| {
                            let sign = if n > 0 && e >> (n - 1) & 1 == 1 {
                                -1.0
                            } else {
                                1.0
                            };
                            sign * TestFamily::weight(n) * proj[c * terms + n]
                        })
                        .sum()
                })
                .collect();
            let gray = |t: usize| (t ^ (t >> 1)) as u32;
            let mut cols = gray(lo);
            let mut s = vec![0.0; k];
            for j in indices(cols) {
                for i in 0..k {
                    s[i] += b[i * k + j];
                }
            }
            let mut best = Best::EMPTY;
            for t in lo..hi {
                if t > lo {
                    let bit = t.trailing_zeros() as usize;
                    cols ^= 1 << bit;
                    let sign = if cols >> bit & 1 == 1 { 1.0 } else { -1.0 };
                    for i in 0..k {
                        s[i] += sign * b[i * k + bit];
                    }
                }
                let (mut pos, mut neg) = (0.0, 0.0);
                for &x in &s {
                    if x > 0.0 {
                        pos += x;
                    } else {
                        neg -= x;
                    }
                }
                for (value, want_positive) in [(pos, true), (neg, false)] {
                    if value >= best.value - TIE {
                        let rows = (0..k)
                            .filter(|&i| {
                                if want_positive {
                                    s[i] > 0.0
                                } else {
                                    s[i] < 0.0
                                }
                            })
                            .fold(0u32, |m, i| m | 1 << i);
                        best.offer(Best { value, rows, cols });
                    }
                }
            }
            best
        })
        .collect();
    let mut best = Best::EMPTY;
    for p in parts {
        best.offer(p);
    }
    (indices(best.rows), indices(best.cols))
}
