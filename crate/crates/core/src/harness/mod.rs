//! Experiment runners that check the quantitative lemmas on random
//! instances and report per-trial rows.

mod suites;

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use suites::{
    suite_by_name, CountingSuite, GraphCloseSuite, LawSuite, NormSuite, RegularitySuite,
    SamplingLemma1, SamplingLemma2, SteppingSuite, WeakIsomorphismSuite, SUITE_NAMES,
};

use crate::error::Result;
use crate::sampling::trial_seed;

/// Tolerance used by the inequality checks.
pub const CHECK_TOL: f64 = 1e-9;

/// One checked inequality `measured <= bound` (or the comparison stated by
/// the check) on one random instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub trial: u64,
    pub seed: u64,
    pub check: String,
    pub params: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Row {
    pub fn new(check: &str, params: String, measured: f64, bound: f64, pass: bool) -> Self {
        Row {
            trial: 0,
            seed: 0,
            check: check.to_string(),
            params,
            measured,
            bound,
            pass,
        }
    }

    /// `measured <= bound + CHECK_TOL`.
    pub fn at_most(check: &str, params: String, measured: f64, bound: f64) -> Self {
        Row::new(
            check,
            params,
            measured,
            bound,
            measured <= bound + CHECK_TOL,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub check: String,
    pub trials: usize,
    pub violations: usize,
    pub violation_fraction: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<Row>,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    experiment: String,
    trial: u64,
    seed: u64,
    check: String,
    params: String,
    measured: f64,
    bound: f64,
    pass: bool,
}

impl ExperimentReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    /// Per-check counts and quantiles of the measured column, checks in
    /// order of first appearance.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut order: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !order.contains(&r.check.as_str()) {
                order.push(&r.check);
            }
        }
        order
            .into_iter()
            .map(|check| {
                let rows: Vec<&Row> = self.rows.iter().filter(|r| r.check == check).collect();
                let mut values: Vec<f64> = rows.iter().map(|r| r.measured).collect();
                values.sort_by(f64::total_cmp);
                let violations = rows.iter().filter(|r| !r.pass).count();
                Aggregate {
                    check: check.to_string(),
                    trials: rows.len(),
                    violations,
                    violation_fraction: violations as f64 / rows.len() as f64,
                    q05: quantile(&values, 0.05),
                    q50: quantile(&values, 0.5),
                    q95: quantile(&values, 0.95),
                }
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                experiment: self.experiment.clone(),
                trial: r.trial,
                seed: r.seed,
                check: r.check.clone(),
                params: r.params.clone(),
                measured: r.measured,
                bound: r.bound,
                pass: r.pass,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Inverse of [`ExperimentReport::write_csv`]. An empty file reads back
    /// as a report named `experiment`.
    pub fn read_csv<R: Read>(input: R, experiment: &str) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let mut name = experiment.to_string();
        let mut rows = Vec::new();
        for rec in rd.deserialize() {
            let r: CsvRow = rec?;
            name = r.experiment;
            rows.push(Row {
                trial: r.trial,
                seed: r.seed,
                check: r.check,
                params: r.params,
                measured: r.measured,
                bound: r.bound,
                pass: r.pass,
            });
        }
        Ok(ExperimentReport {
            experiment: name,
            rows,
        })
    }

    /// JSON summary printed by the command line.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "rows": self.rows.len(),
            "violations": self.violations(),
            "checks": self.aggregates(),
        })
    }
}

/// A family of random instances indexed by a seed.
pub trait Suite: Sync {
    fn name(&self) -> &'static str;

    /// All checks on the instance drawn from `seed`. Running it again with
    /// the same seed reproduces the rows exactly.
    fn trial(&self, seed: u64) -> Result<Vec<Row>>;

    /// Checks over all trials, e.g. trend or frequency tests; default none.
    fn summarize(&self, _rows: &[Row]) -> Vec<Row> {
        Vec::new()
    }
}

/// Run `trials` trials in parallel; trial `t` uses the seed
/// `trial_seed(seed, t)` and rows keep trial order.
pub fn run(suite: &dyn Suite, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let per_trial: Vec<Result<Vec<Row>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let mut rows = suite.trial(s)?;
            for r in &mut rows {
                r.trial = t;
                r.seed = s;
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    let extra = suite.summarize(&rows);
    rows.extend(extra.into_iter().map(|mut r| {
        r.trial = trials as u64;
        r.seed = seed;
        r
    }));
    Ok(ExperimentReport {
        experiment: suite.name().to_string(),
        rows,
    })
}
