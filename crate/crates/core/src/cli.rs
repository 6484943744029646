//! The `pgraphon` command line: JSON files in, JSON on stdout.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 when an input exceeds a
//! capability limit of an exact algorithm.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cutmetric::{
    cut_dist_exact, cut_dist_heuristic, cut_norm_exact, cut_norm_heuristic, delta_cut,
    weak_regularity_partition, Bound, CutWitness, DeltaOptions, Metric, RegularityOptions,
    SearchOptions,
};
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::harness::{self, GraphCloseSuite, LawSuite, SamplingLemma1, SamplingLemma2, Suite};
use crate::homdensity::{hom_density_exact, hom_density_graph, hom_density_mc};
use crate::io::{self, Context};
use crate::measures::{TestFamily, WeightSpace};
use crate::sampling::{sample_g, sample_h};

#[derive(Debug, Parser)]
#[command(
    name = "pgraphon",
    version,
    about = "Probability-graphons over finite weight spaces"
)]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = MetricArg::Fnorm)]
    pub metric: MetricArg,
    /// Test family for the F-norm: a JSON file, canonical by default.
    #[arg(long, global = true)]
    pub family: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Prohorov,
    Kr,
    Fm,
    Fnorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Heuristic,
    Brute,
    Anneal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance (or norm of the difference) between two measures.
    Dist { mu: PathBuf, nu: PathBuf },
    /// Cut norm of a signed kernel.
    Cutnorm {
        kernel: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Labeled cut distance between two graphons.
    Cutdist {
        u: PathBuf,
        w: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Minimum cut distance over relabelings of an equipartition.
    Delta {
        u: PathBuf,
        w: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Brute)]
        mode: Mode,
        /// Number of equal blocks; defaults to the least common
        /// denominator of both partitions.
        #[arg(long)]
        granularity: Option<usize>,
    },
    /// A W-random graph G(k, W), or the measure graph H(k, W) with `--measures`.
    Sample {
        w: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        measures: bool,
    },
    /// Homomorphism density of a decorated graph in a graphon or a graph.
    Homdens {
        f: PathBuf,
        /// A graphon or a sampled graph.
        target: PathBuf,
        /// Monte Carlo samples instead of exact enumeration.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Weak regularity partition with at most `target` classes.
    Regularize {
        w: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Run a verification suite and write its rows as CSV.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(harness::SUITE_NAMES))]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Graphons for `sampling1` (`--u`, `--w`) and `sampling2` (`--w`).
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long)]
        w: Option<PathBuf>,
        /// Vertex count for `sampling1` and `graph-close`.
        #[arg(long)]
        k: Option<usize>,
        /// Vertex counts for `sampling2`.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        /// Sample size for `law`.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn load(path: &Path) -> Result<(Value, Context)> {
    Ok((io::read_json(path)?, Context::for_file(path)))
}

fn load_graphon(path: &Path) -> Result<StepGraphon> {
    let (v, ctx) = load(path)?;
    io::graphon_from_json(&v, &ctx)
}

impl Cli {
    fn family(&self, space: &std::sync::Arc<WeightSpace>) -> Result<TestFamily> {
        match &self.family {
            Some(p) => io::family_from_json(&io::read_json(p)?, space),
            None => Ok(TestFamily::canonical(space.clone())),
        }
    }

    fn metric(&self, space: &std::sync::Arc<WeightSpace>) -> Result<Metric> {
        Ok(match self.metric {
            MetricArg::Prohorov => Metric::Prohorov,
            MetricArg::Kr => Metric::Kr,
            MetricArg::Fm => Metric::Fm,
            MetricArg::Fnorm => Metric::FNorm(self.family(space)?),
        })
    }

    fn search(&self, restarts: usize) -> SearchOptions {
        SearchOptions {
            restarts,
            seed: self.seed,
        }
    }

    /// Result document for the parsed command.
    pub fn execute(&self) -> Result<Value> {
        match &self.command {
            Command::Dist { mu, nu } => {
                let (a, ca) = load(mu)?;
                let (b, cb) = load(nu)?;
                let mu = io::measure_from_json(&a, &ca)?;
                let nu = io::measure_from_json(&b, &cb)?;
                let metric = self.metric(mu.space())?;
                let value = metric.distance(&mu, &nu)?;
                Ok(json!({ "metric": metric.name(), "value": value }))
            }
            Command::Cutnorm {
                kernel,
                mode,
                restarts,
            } => {
                let d = load_graphon(kernel)?;
                let metric = self.metric(d.space())?;
                let (wit, bound) = match mode {
                    Mode::Exact => (cut_norm_exact(&d, &metric)?, Bound::Exact),
                    Mode::Heuristic => (
                        cut_norm_heuristic(&d, &metric, self.search(*restarts))?,
                        Bound::Lower,
                    ),
                    _ => {
                        return Err(Error::Parse(
                            "cutnorm takes --mode exact or heuristic".into(),
                        ))
                    }
                };
                Ok(witness_doc(&metric, &wit, bound))
            }
            Command::Cutdist {
                u,
                w,
                mode,
                restarts,
            } => {
                let (u, w) = (load_graphon(u)?, load_graphon(w)?);
                let metric = self.metric(u.space())?;
                let (wit, bound) = match mode {
                    Mode::Exact => (cut_dist_exact(&u, &w, &metric)?, Bound::Exact),
                    Mode::Heuristic => (
                        cut_dist_heuristic(&u, &w, &metric, self.search(*restarts))?,
                        Bound::Lower,
                    ),
                    _ => {
                        return Err(Error::Parse(
                            "cutdist takes --mode exact or heuristic".into(),
                        ))
                    }
                };
                Ok(witness_doc(&metric, &wit, bound))
            }
            Command::Delta {
                u,
                w,
                mode,
                granularity,
            } => {
                let (u, w) = (load_graphon(u)?, load_graphon(w)?);
                let metric = self.metric(u.space())?;
                let l = match granularity {
                    Some(l) => *l,
                    None => {
                        let (a, b) = (
                            u.partition().common_denominator(),
                            w.partition().common_denominator(),
                        );
                        usize::try_from(num_integer::lcm(a, b))
                            .map_err(|_| Error::Parse("granularity overflow".into()))?
                    }
                };
                let opts = match mode {
                    Mode::Brute => DeltaOptions::brute(l),
                    Mode::Anneal => DeltaOptions::anneal(l, self.seed),
                    _ => return Err(Error::Parse("delta takes --mode brute or anneal".into())),
                };
                let res = delta_cut(&u, &w, &metric, &opts)?;
                Ok(json!({
                    "metric": metric.name(),
                    "granularity": l,
                    "value": res.value,
                    "bound": res.bound,
                    "permutation": res.permutation,
                    "evaluations": res.evaluations,
                }))
            }
            Command::Sample {
                w,
                k,
                symmetric,
                measures,
            } => {
                let w = load_graphon(w)?;
                if *measures {
                    let (h, types) = sample_h(&w, *k, self.seed)?;
                    let cells: Vec<Vec<Vec<f64>>> = (0..h.n())
                        .map(|i| (0..h.n()).map(|j| h.cell(i, j).to_vec()).collect())
                        .collect();
                    Ok(json!({ "types": types, "n": h.n(), "cells": cells }))
                } else {
                    Ok(io::graph_to_json(&sample_g(&w, *k, self.seed, *symmetric)?))
                }
            }
            Command::Homdens { f, target, samples } => {
                let (tv, tc) = load(target)?;
                let (fv, _) = load(f)?;
                if tv.get("lengths").is_some() {
                    let w = io::graphon_from_json(&tv, &tc)?;
                    let f = io::decorated_from_json(&fv, &self.family(w.space())?)?;
                    match samples {
                        Some(n) => {
                            let (value, se) = hom_density_mc(&f, &w, *n, self.seed)?;
                            Ok(json!({ "value": value, "standard_error": se, "exact": false }))
                        }
                        None => Ok(json!({ "value": hom_density_exact(&f, &w)?, "exact": true })),
                    }
                } else {
                    let g = io::graph_from_json(&tv, &tc)?;
                    let f = io::decorated_from_json(&fv, &self.family(g.space())?)?;
                    Ok(json!({ "value": hom_density_graph(&f, &g)?, "exact": true }))
                }
            }
            Command::Regularize {
                w,
                target,
                restarts,
            } => {
                let w = load_graphon(w)?;
                let family = self.family(w.space())?;
                let opts = RegularityOptions {
                    search: self.search(*restarts),
                    ..Default::default()
                };
                let res = weak_regularity_partition(&w, *target, &family, &opts)?;
                Ok(json!({
                    "classes": res.partition.classes(),
                    "graphon": io::graphon_to_json(&res.stepped),
                    "error": res.error,
                    "error_bound": res.error_bound,
                    "certified_bound": res.certified_bound,
                    "witness": res.witness,
                    "iterations": res.iterations,
                }))
            }
            Command::Verify {
                suite,
                trials,
                out,
                u,
                w,
                k,
                ks,
                samples,
            } => {
                let suite =
                    self.suite(suite, u.as_deref(), w.as_deref(), *k, ks.clone(), *samples)?;
                let report = harness::run(suite.as_ref(), *trials, self.seed)?;
                if let Some(path) = out {
                    report.write_csv(File::create(path)?)?;
                }
                Ok(report.summary())
            }
        }
    }

    fn suite(
        &self,
        name: &str,
        u: Option<&Path>,
        w: Option<&Path>,
        k: Option<usize>,
        ks: Option<Vec<usize>>,
        samples: Option<usize>,
    ) -> Result<Box<dyn Suite>> {
        let unknown = || Error::Parse(format!("unknown suite {name}"));
        Ok(match name {
            "sampling1" => {
                let d = SamplingLemma1::default();
                Box::new(SamplingLemma1 {
                    u: u.map(load_graphon).transpose()?.unwrap_or(d.u),
                    w: w.map(load_graphon).transpose()?.unwrap_or(d.w),
                    k: k.unwrap_or(d.k),
                })
            }
            "sampling2" => {
                let d = SamplingLemma2::default();
                Box::new(SamplingLemma2 {
                    w: w.map(load_graphon).transpose()?.unwrap_or(d.w),
                    ks: ks.unwrap_or(d.ks),
                })
            }
            "graph-close" => Box::new(GraphCloseSuite {
                k: k.unwrap_or(GraphCloseSuite::default().k),
            }),
            "law" => Box::new(LawSuite {
                samples: samples.unwrap_or(LawSuite::default().samples),
            }),
            _ => harness::suite_by_name(name).ok_or_else(unknown)?,
        })
    }
}

fn witness_doc(metric: &Metric, wit: &CutWitness, bound: Bound) -> Value {
    json!({ "metric": metric.name(), "value": wit.value, "bound": bound, "witness": wit })
}

/// Exit code for an error: 3 for capability limits, 2 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_capability_limit() {
        3
    } else {
        2
    }
}

/// Parse arguments, run, print the result. Used by the `pgraphon` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.execute() {
        Ok(doc) => {
            let mut out = std::io::stdout().lock();
            let text = serde_json::to_string_pretty(&doc).expect("serializable");
            if writeln!(out, "{text}").is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
