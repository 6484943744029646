//! JSON documents for spaces, measures, graphons, graphs, decorated graphs
//! and witnesses.
//!
//! Reals may be JSON numbers or strings holding a decimal or a fraction
//! `p/q`; NaN and infinities are rejected. A `"space"` field holds either
//! an inline space or the path of a space document, resolved relative to
//! the referring file.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::SampledGraph;
use crate::homdensity::DecoratedGraph;
use crate::measures::{MeasureKind, SignedMeasure, TestFamily, WeightSpace};
use crate::partition::{format_rational, parse_rational, to_f64, Partition};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| bad(format!("missing field \"{name}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

/// A finite real from a number or a decimal/fraction string.
pub fn real(v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad("number out of range"))?,
        Value::String(s) if s.contains('/') => to_f64(&parse_rational(s)?),
        Value::String(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("\"{s}\" is not a real")))?,
        other => return Err(bad(format!("expected a real, found {other}"))),
    };
    if !x.is_finite() {
        return Err(bad("reals must be finite"));
    }
    Ok(x)
}

fn reals(v: &Value, what: &str) -> Result<Vec<f64>> {
    array(v, what)?.iter().map(real).collect()
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Document location used to resolve relative `"space"` paths.
#[derive(Debug, Clone, Default)]
pub struct Context {
    base: Option<PathBuf>,
}

impl Context {
    pub fn for_file(path: &Path) -> Self {
        Context {
            base: path.parent().map(Path::to_path_buf),
        }
    }

    fn resolve(&self, p: &str) -> PathBuf {
        match &self.base {
            Some(b) if Path::new(p).is_relative() => b.join(p),
            _ => PathBuf::from(p),
        }
    }

    pub fn space(&self, v: &Value) -> Result<Arc<WeightSpace>> {
        match v {
            Value::String(p) => {
                let path = self.resolve(p);
                let doc = read_json(&path)?;
                space_from_json(&doc)
            }
            _ => space_from_json(v),
        }
    }
}

pub fn space_from_json(v: &Value) -> Result<Arc<WeightSpace>> {
    let points: Vec<String> = array(field(v, "points")?, "points")?
        .iter()
        .map(|p| match p {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(bad("point labels must be strings or numbers")),
        })
        .collect::<Result<_>>()?;
    let metric = array(field(v, "metric")?, "metric")?
        .iter()
        .map(|row| reals(row, "metric row"))
        .collect::<Result<Vec<_>>>()?;
    let cemetery = match v.get("cemetery") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(
            points
                .iter()
                .position(|p| p == s)
                .ok_or_else(|| bad(format!("unknown cemetery point \"{s}\"")))?,
        ),
        Some(other) => Some(index(other, "cemetery")?),
    };
    Ok(WeightSpace::new(points, metric, cemetery)?.shared())
}

pub fn space_to_json(s: &WeightSpace) -> Value {
    json!({
        "points": s.points(),
        "metric": s.metric_rows(),
        "cemetery": s.cemetery().map(|c| s.points()[c].clone()),
    })
}

pub fn measure_from_json(v: &Value, ctx: &Context) -> Result<SignedMeasure> {
    let space = ctx.space(field(v, "space")?)?;
    SignedMeasure::new(space, reals(field(v, "mass")?, "mass")?)
}

pub fn measure_to_json(mu: &SignedMeasure) -> Value {
    json!({ "space": space_to_json(mu.space()), "mass": mu.mass() })
}

fn kind_from(v: Option<&Value>) -> Result<MeasureKind> {
    match v {
        None | Some(Value::Null) => Ok(MeasureKind::Probability),
        Some(k) => serde_json::from_value(k.clone()).map_err(|_| bad(format!("unknown kind {k}"))),
    }
}

pub fn graphon_from_json(v: &Value, ctx: &Context) -> Result<StepGraphon> {
    let space = ctx.space(field(v, "space")?)?;
    let lengths = array(field(v, "lengths")?, "lengths")?
        .iter()
        .map(|l| match l {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_u64() => Ok(parse_rational(&n.to_string())?),
            _ => Err(bad("block lengths must be exact fractions such as \"1/3\"")),
        })
        .collect::<Result<Vec<_>>>()?;
    let partition = Partition::new(lengths)?;
    let k = partition.len();
    let rows = array(field(v, "cells")?, "cells")?;
    if rows.len() != k {
        return Err(bad(format!("cells must have {k} rows")));
    }
    let mut cells = Vec::with_capacity(k * k * space.len());
    for row in rows {
        let row = array(row, "cells row")?;
        if row.len() != k {
            return Err(bad(format!("every cells row must have {k} entries")));
        }
        for cell in row {
            let mass = reals(cell, "cell")?;
            if mass.len() != space.len() {
                return Err(bad(format!("every cell needs {} masses", space.len())));
            }
            cells.extend(mass);
        }
    }
    StepGraphon::new(space, partition, cells, kind_from(v.get("kind"))?)
}

pub fn graphon_to_json(w: &StepGraphon) -> Value {
    let k = w.k();
    let cells: Vec<Vec<&[f64]>> = (0..k)
        .map(|i| (0..k).map(|j| w.cell(i, j)).collect())
        .collect();
    json!({
        "space": space_to_json(w.space()),
        "lengths": w.partition().lengths().iter().map(format_rational).collect::<Vec<_>>(),
        "cells": cells,
        "kind": w.kind(),
    })
}

pub fn graph_from_json(v: &Value, ctx: &Context) -> Result<SampledGraph> {
    let space = ctx.space(field(v, "space")?)?;
    let n = index(field(v, "n")?, "n")?;
    let rows = array(field(v, "weights")?, "weights")?;
    if rows.len() != n {
        return Err(bad(format!("weights must have {n} rows")));
    }
    let mut weights = Vec::with_capacity(n * n);
    for row in rows {
        let row = array(row, "weights row")?;
        if row.len() != n {
            return Err(bad(format!("every weights row must have {n} entries")));
        }
        for x in row {
            weights.push(match x {
                Value::Null => None,
                Value::String(s) => Some(
                    space
                        .index_of(s)
                        .ok_or_else(|| bad(format!("unknown weight \"{s}\"")))?,
                ),
                other => Some(index(other, "weight")?),
            });
        }
    }
    let symmetric = v.get("symmetric").and_then(Value::as_bool).unwrap_or(false);
    SampledGraph::new(space, n, weights, symmetric)
}

pub fn graph_to_json(g: &SampledGraph) -> Value {
    let n = g.n();
    let weights: Vec<Vec<Option<usize>>> = (0..n)
        .map(|i| (0..n).map(|j| g.weight(i, j)).collect())
        .collect();
    json!({
        "space": space_to_json(g.space()),
        "n": n,
        "weights": weights,
        "symmetric": g.symmetric(),
    })
}

/// `{"functions": [[...], ...]}` over the given space, or the string
/// `"canonical"`.
pub fn family_from_json(v: &Value, space: &Arc<WeightSpace>) -> Result<TestFamily> {
    match v {
        Value::String(s) if s == "canonical" => Ok(TestFamily::canonical(space.clone())),
        _ => {
            let fs = array(field(v, "functions")?, "functions")?
                .iter()
                .map(|f| reals(f, "function"))
                .collect::<Result<Vec<_>>>()?;
            TestFamily::new(space.clone(), fs)
        }
    }
}

pub fn decorated_from_json(v: &Value, family: &TestFamily) -> Result<DecoratedGraph> {
    let nv = index(field(v, "v")?, "v")?;
    let edges = array(field(v, "edges")?, "edges")?
        .iter()
        .map(|e| {
            let pair = array(e, "edge")?;
            if pair.len() != 2 {
                return Err(bad("edges are [i, j] pairs"));
            }
            Ok((index(&pair[0], "edge end")?, index(&pair[1], "edge end")?))
        })
        .collect::<Result<Vec<_>>>()?;
    let dec = field(v, "decorations")?;
    match dec.get("family_indices") {
        Some(ix) => {
            let ix = array(ix, "family_indices")?
                .iter()
                .map(|x| index(x, "family index"))
                .collect::<Result<_>>()?;
            DecoratedGraph::from_family(nv, edges, family, ix)
        }
        None => {
            let gs = array(dec, "decorations")?
                .iter()
                .map(|g| reals(g, "decoration"))
                .collect::<Result<_>>()?;
            DecoratedGraph::new(nv, edges, gs)
        }
    }
}

pub fn decorated_to_json(f: &DecoratedGraph) -> Value {
    let edges: Vec<[usize; 2]> = f.edges.iter().map(|&(a, b)| [a, b]).collect();
    let decorations = match &f.family_indices {
        Some(ix) => json!({ "family_indices": ix }),
        None => json!(f.decorations),
    };
    json!({ "v": f.v, "edges": edges, "decorations": decorations })
}
