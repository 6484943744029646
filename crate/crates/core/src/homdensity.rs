//! Decorated graphs and homomorphism densities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::SampledGraph;
use crate::measures::TestFamily;

/// Largest number of vertex maps enumerated by the exact densities.
pub const EXACT_MAP_BUDGET: u128 = 100_000_000;

/// A directed graph `F` with a real function `g_e` on the weight space for
/// every edge. For F-graphs, `family_indices[e] = n_e` records that
/// `g_e = f_{n_e}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub v: usize,
    pub edges: Vec<(usize, usize)>,
    pub decorations: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_indices: Option<Vec<usize>>,
}

fn check_skeleton(v: usize, edges: &[(usize, usize)]) -> Result<()> {
    for (idx, &(a, b)) in edges.iter().enumerate() {
        if a >= v || b >= v {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) leaves the {v} vertices"
            )));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
        }
        if edges[..idx].contains(&(a, b)) {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) listed twice")));
        }
    }
    Ok(())
}

impl DecoratedGraph {
    pub fn new(v: usize, edges: Vec<(usize, usize)>, decorations: Vec<Vec<f64>>) -> Result<Self> {
        check_skeleton(v, &edges)?;
        if decorations.len() != edges.len() {
            return Err(Error::InvalidGraph(format!(
                "{} edges but {} decorations",
                edges.len(),
                decorations.len()
            )));
        }
        if decorations.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGraph("decorations must be finite".into()));
        }
        Ok(DecoratedGraph {
            v,
            edges,
            decorations,
            family_indices: None,
        })
    }

    /// An F-graph: edge `e` carries the test function `f_{indices[e]}`.
    pub fn from_family(
        v: usize,
        edges: Vec<(usize, usize)>,
        family: &TestFamily,
        indices: Vec<usize>,
    ) -> Result<Self> {
        if let Some(&n) = indices.iter().find(|&&n| n >= family.len()) {
            return Err(Error::InvalidGraph(format!(
                "family index {n} out of range"
            )));
        }
        let decorations = indices
            .iter()
            .map(|&n| family.function(n).to_vec())
            .collect();
        let mut g = DecoratedGraph::new(v, edges, decorations)?;
        g.family_indices = Some(indices);
        Ok(g)
    }

    /// `sum_e 2^{n_e}`, the Counting Lemma constant of an F-graph.
    pub fn counting_constant(&self) -> Option<f64> {
        self.family_indices
            .as_ref()
            .map(|ix| ix.iter().map(|&n| 2f64.powi(n as i32)).sum())
    }

    fn check_width(&self, m: usize) -> Result<()> {
        if self.decorations.iter().any(|g| g.len() != m) {
            return Err(Error::InvalidGraph(format!(
                "decorations must have one value per point ({m})"
            )));
        }
        Ok(())
    }
}

fn budget(base: usize, exp: usize, what: &'static str, hint: &'static str) -> Result<u128> {
    let size = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if size > EXACT_MAP_BUDGET {
        return Err(Error::CapabilityLimit {
            what,
            size,
            limit: EXACT_MAP_BUDGET,
            hint,
        });
    }
    Ok(size)
}

/// Advance `phi` (digits base `k`, skipping position 0) like an odometer.
fn next_map(phi: &mut [usize], k: usize) -> bool {
    for d in phi.iter_mut().skip(1).rev() {
        *d += 1;
        if *d < k {
            return true;
        }
        *d = 0;
    }
    false
}

/// `t(F^g, W) = sum_phi prod_i lambda_phi(i) prod_{(i,j)} W(phi i, phi j; g_ij)`
/// over block maps `phi`.
///
/// Parallel over the block of vertex 0, summed in block order.
pub fn hom_density_exact(f: &DecoratedGraph, w: &StepGraphon) -> Result<f64> {
    f.check_width(w.m())?;
    let k = w.k();
    budget(
        k,
        f.v,
        "exact homomorphism density",
        "use the Monte Carlo estimator",
    )?;
    if f.v == 0 {
        return Ok(1.0);
    }
    let lam = w.partition().lengths_f64();
    let mats: Vec<Vec<f64>> = f.decorations.iter().map(|g| w.integrate(g)).collect();
    let parts: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|b| {
            let mut phi = vec![0; f.v];
            phi[0] = b;
            let mut total = 0.0;
            loop {
                let mut term: f64 = phi.iter().map(|&p| lam[p]).product();
                for (mat, &(i, j)) in mats.iter().zip(&f.edges) {
                    term *= mat[phi[i] * k + phi[j]];
                }
                total += term;
                if !next_map(&mut phi, k) {
                    break;
                }
            }
            total
        })
        .collect();
    Ok(parts.iter().sum())
}

/// Monte Carlo estimate of `t(F^g, W)` over `samples` i.i.d. vertex-type
/// draws, with its standard error.
pub fn hom_density_mc(
    f: &DecoratedGraph,
    w: &StepGraphon,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    f.check_width(w.m())?;
    if samples == 0 {
        return Err(Error::InvalidGraph(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let k = w.k();
    let mats: Vec<Vec<f64>> = f.decorations.iter().map(|g| w.integrate(g)).collect();
    let types = crate::sampling::sample_types(w.partition(), samples * f.v, seed);
    let values: Vec<f64> = types
        .chunks(f.v.max(1))
        .take(samples)
        .map(|phi| {
            mats.iter()
                .zip(&f.edges)
                .map(|(mat, &(i, j))| mat[phi[i] * k + phi[j]])
                .product()
        })
        .collect();
    let values = if f.v == 0 { vec![1.0; samples] } else { values };
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let se = if samples > 1 {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, se))
}

/// `t(F^g, G) = n^{-v} sum_phi prod_{(i,j)} g_ij(beta(phi i, phi j))` over all
/// vertex maps, repeats included; a repeated vertex reads the diagonal,
/// which holds the cemetery point.
pub fn hom_density_graph(f: &DecoratedGraph, g: &SampledGraph) -> Result<f64> {
    f.check_width(g.space().len())?;
    let n = g.n();
    budget(
        n,
        f.v,
        "graph homomorphism density",
        "subsample the graph first",
    )?;
    if f.v == 0 {
        return Ok(1.0);
    }
    if n == 0 {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    let mut weight = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            weight.push(g.weight_or_cemetery(i, j)?);
        }
    }
    let parts: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut phi = vec![0; f.v];
            phi[0] = a;
            let mut total = 0.0;
            loop {
                let mut term = 1.0;
                for (dec, &(i, j)) in f.decorations.iter().zip(&f.edges) {
                    term *= dec[weight[phi[i] * n + phi[j]]];
                }
                total += term;
                if !next_map(&mut phi, n) {
                    break;
                }
            }
            total
        })
        .collect();
    Ok(parts.iter().sum::<f64>() / (n as f64).powi(f.v as i32))
}

/// `M_W^F`, the joint law of the edge values over `Z^E`. Entries are
/// indexed by `(z_e)_e` with the first edge most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJointMeasure {
    pub edges: Vec<(usize, usize)>,
    pub points: usize,
    pub entries: Vec<f64>,
}

impl EdgeJointMeasure {
    pub fn entry(&self, outcome: &[usize]) -> f64 {
        self.entries[self.index(outcome)]
    }

    pub fn index(&self, outcome: &[usize]) -> usize {
        outcome.iter().fold(0, |acc, &z| acc * self.points + z)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }
}

pub fn edge_joint_measure(
    v: usize,
    edges: &[(usize, usize)],
    w: &StepGraphon,
) -> Result<EdgeJointMeasure> {
    check_skeleton(v, edges)?;
    let (k, m) = (w.k(), w.m());
    let tensor = budget(m, edges.len(), "edge joint measure", "use fewer edges")?;
    let maps = budget(k, v, "edge joint measure", "use fewer vertices")?;
    if tensor.saturating_mul(maps) > EXACT_MAP_BUDGET {
        return Err(Error::CapabilityLimit {
            what: "edge joint measure",
            size: tensor.saturating_mul(maps),
            limit: EXACT_MAP_BUDGET,
            hint: "use fewer edges or blocks",
        });
    }
    let lam = w.partition().lengths_f64();
    let mut entries = vec![0.0; tensor as usize];
    let mut phi = vec![0; v];
    let mut scratch = vec![0.0; tensor as usize];
    let mut visit = |phi: &[usize]| {
        let weight: f64 = phi.iter().map(|&p| lam[p]).product();
        scratch[0] = weight;
        let mut len = 1;
        for &(i, j) in edges {
            let cell = w.cell(phi[i], phi[j]);
            for idx in (0..len).rev() {
                let base = scratch[idx];
                for z in 0..m {
                    scratch[idx * m + z] = base * cell[z];
                }
            }
            len *= m;
        }
        for (e, s) in entries.iter_mut().zip(&scratch) {
            *e += s;
        }
    };
    if v == 0 {
        entries[0] = 1.0;
    } else {
        for first in 0..k {
            phi.iter_mut().for_each(|p| *p = 0);
            phi[0] = first;
            loop {
                visit(&phi);
                if !next_map(&mut phi, k) {
                    break;
                }
            }
        }
    }
    Ok(EdgeJointMeasure {
        edges: edges.to_vec(),
        points: m,
        entries,
    })
}

/// The `2^{n0}` functions `f^s = prod_{n=1}^{n0} f_n^{s_n} (1 - f_n)^{1 - s_n}`,
/// with `s` in lexicographic order (`s_1` most significant).
pub fn inverse_counting_decorations(family: &TestFamily, n0: usize) -> Result<Vec<Vec<f64>>> {
    if n0 + 1 > family.len() {
        return Err(Error::InvalidFamily(format!(
            "n0 = {n0} needs {} functions",
            n0 + 1
        )));
    }
    let m = family.space().len();
    Ok((0..1usize << n0)
        .map(|s| {
            (0..m)
                .map(|z| {
                    (1..=n0)
                        .map(|n| {
                            let bit = s >> (n0 - n) & 1 == 1;
                            let f = family.function(n)[z];
                            if bit {
                                f
                            } else {
                                1.0 - f
                            }
                        })
                        .product()
                })
                .collect()
        })
        .collect())
}
