//! Local search over row and column sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::scan::{Objective, Stack};
use super::SearchOptions;
use crate::error::Result;

const IMPROVE: f64 = 1e-12;
const MAX_ROUNDS: usize = 200;

pub(crate) struct Found {
    pub value: f64,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Current rectangle with `rowsum[i] = sum_{j in J} cell(i, j)` and
/// `colsum[j] = sum_{i in I} cell(i, j)` kept up to date.
struct State<'a> {
    stack: &'a Stack,
    rows: Vec<bool>,
    cols: Vec<bool>,
    rowsum: Vec<f64>,
    colsum: Vec<f64>,
    acc: Vec<f64>,
}

impl<'a> State<'a> {
    fn new(stack: &'a Stack, rows: Vec<bool>, cols: Vec<bool>) -> Self {
        let (k, w) = (stack.k, stack.width);
        let mut s = State {
            stack,
            rows,
            cols,
            rowsum: vec![0.0; k * w],
            colsum: vec![0.0; k * w],
            acc: vec![0.0; w],
        };
        for i in 0..k {
            for j in 0..k {
                let c = stack.cell(i, j);
                if s.cols[j] {
                    add(&mut s.rowsum[i * w..(i + 1) * w], c, 1.0);
                }
                if s.rows[i] {
                    add(&mut s.colsum[j * w..(j + 1) * w], c, 1.0);
                }
                if s.rows[i] && s.cols[j] {
                    add(&mut s.acc, c, 1.0);
                }
            }
        }
        s
    }

    fn row_delta(&self, i: usize) -> (f64, &[f64]) {
        let w = self.stack.width;
        (
            if self.rows[i] { -1.0 } else { 1.0 },
            &self.rowsum[i * w..(i + 1) * w],
        )
    }

    fn col_delta(&self, j: usize) -> (f64, &[f64]) {
        let w = self.stack.width;
        (
            if self.cols[j] { -1.0 } else { 1.0 },
            &self.colsum[j * w..(j + 1) * w],
        )
    }

    fn flip_row(&mut self, i: usize) {
        let (k, w) = (self.stack.k, self.stack.width);
        let sign = if self.rows[i] { -1.0 } else { 1.0 };
        add(
            &mut self.acc,
            &self.rowsum[i * w..(i + 1) * w],
            sign,
        );
        for j in 0..k {
            add(
                &mut self.colsum[j * w..(j + 1) * w],
                self.stack.cell(i, j),
                sign,
            );
        }
        self.rows[i] = !self.rows[i];
    }

    fn flip_col(&mut self, j: usize) {
        let (k, w) = (self.stack.k, self.stack.width);
        let sign = if self.cols[j] { -1.0 } else { 1.0 };
        add(
            &mut self.acc,
            &self.colsum[j * w..(j + 1) * w],
            sign,
        );
        for i in 0..k {
            add(
                &mut self.rowsum[i * w..(i + 1) * w],
                self.stack.cell(i, j),
                sign,
            );
        }
        self.cols[j] = !self.cols[j];
    }

    /// Alternate best responses for the linear objective `<g, .>`.
    fn best_response(&mut self, g: &[f64]) {
        let (k, w) = (self.stack.k, self.stack.width);
        for _ in 0..MAX_ROUNDS {
            let mut changed = false;
            for i in 0..k {
                let score = dot(g, &self.rowsum[i * w..(i + 1) * w]);
                if (score > 0.0 && !self.rows[i]) || (score < 0.0 && self.rows[i]) {
                    self.flip_row(i);
                    changed = true;
                }
            }
            for j in 0..k {
                let score = dot(g, &self.colsum[j * w..(j + 1) * w]);
                if (score > 0.0 && !self.cols[j]) || (score < 0.0 && self.cols[j]) {
                    self.flip_col(j);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn indices(mask: &[bool]) -> Vec<usize> {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }
}

fn add(dst: &mut [f64], src: &[f64], sign: f64) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += sign * s;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn shifted(acc: &[f64], delta: (f64, &[f64])) -> Vec<f64> {
    acc.iter()
        .zip(delta.1)
        .map(|(a, d)| a + delta.0 * d)
        .collect()
}

fn climb(state: &mut State, obj: &Objective) -> Result<f64> {
    let k = state.stack.k;
    let mut value = obj.eval(&state.acc)?;
    for _ in 0..MAX_ROUNDS {
        let mut improved = false;
        if let Some(g) = obj.dual(&state.acc)? {
            let saved = (state.rows.clone(), state.cols.clone());
            state.best_response(&g);
            let v = obj.eval(&state.acc)?;
            if v > value + IMPROVE {
                value = v;
                improved = true;
            } else if (state.rows.clone(), state.cols.clone()) != saved {
                *state = State::new(state.stack, saved.0, saved.1);
            }
        }
        for i in 0..k {
            let cand = shifted(&state.acc, state.row_delta(i));
            if obj.upper(&cand) > value + IMPROVE {
                let v = obj.eval(&cand)?;
                if v > value + IMPROVE {
                    state.flip_row(i);
                    value = v;
                    improved = true;
                }
            }
        }
        for j in 0..k {
            let cand = shifted(&state.acc, state.col_delta(j));
            if obj.upper(&cand) > value + IMPROVE {
                let v = obj.eval(&cand)?;
                if v > value + IMPROVE {
                    state.flip_col(j);
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(value)
}

/// Hill climbing from the full rectangle and from `restarts` random ones.
/// Starts run in parallel but are reduced in order, so the result only
/// depends on the seed.
pub(crate) fn search(stack: &Stack, obj: &Objective, opts: SearchOptions) -> Result<Found> {
    let k = stack.k;
    let results: Vec<Result<Found>> = (0..=opts.restarts)
        .into_par_iter()
        .map(|start| {
            let (rows, cols) = if start == 0 {
                (vec![true; k], vec![true; k])
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(start as u64);
                let rows = (0..k).map(|_| rng.gen_bool(0.5)).collect();
                let cols = (0..k).map(|_| rng.gen_bool(0.5)).collect();
                (rows, cols)
            };
            let mut state = State::new(stack, rows, cols);
            let value = climb(&mut state, obj)?;
            Ok(Found {
                value,
                rows: State::indices(&state.rows),
                cols: State::indices(&state.cols),
            })
        })
        .collect();
    let mut best = Found {
        value: 0.0,
        rows: Vec::new(),
        cols: Vec::new(),
    };
    for r in results {
        let r = r?;
        if r.value > best.value + IMPROVE {
            best = r;
        }
    }
    Ok(best)
}
