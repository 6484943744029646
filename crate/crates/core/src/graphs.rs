//! Finite graphs with measures or weights on their edges.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::{MeasureKind, WeightSpace};

/// A complete directed graph whose edge `(i, j)` is decorated by a
/// probability measure on the weight space.
///
/// Diagonal cells hold the Dirac mass at the cemetery point when the space
/// has one; otherwise they hold whatever the producer put there and are
/// ignored by edge sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureGraph {
    space: Arc<WeightSpace>,
    n: usize,
    cells: Vec<f64>,
}

impl MeasureGraph {
    pub fn new(space: Arc<WeightSpace>, n: usize, cells: Vec<f64>) -> Result<Self> {
        let m = space.len();
        if cells.len() != n * n * m {
            return Err(Error::InvalidGraph(format!(
                "expected {} masses, got {}",
                n * n * m,
                cells.len()
            )));
        }
        for (idx, c) in cells.chunks(m).enumerate() {
            if idx / n != idx % n && !MeasureKind::Probability.admits(c) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) is not a probability measure",
                    idx / n,
                    idx % n
                )));
            }
        }
        Ok(MeasureGraph { space, n, cells })
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let m = self.space.len();
        let off = (i * self.n + j) * m;
        &self.cells[off..off + m]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.cell(i, j) == self.cell(j, i)))
    }
}

/// A complete directed graph with a weight (a point of the weight space) on
/// every edge. `None` marks a missing edge; the diagonal is always `None` or
/// the cemetery point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGraph {
    space: Arc<WeightSpace>,
    n: usize,
    weights: Vec<Option<usize>>,
    symmetric: bool,
}

impl SampledGraph {
    pub fn new(
        space: Arc<WeightSpace>,
        n: usize,
        weights: Vec<Option<usize>>,
        symmetric: bool,
    ) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::InvalidGraph(format!(
                "expected {} weights, got {}",
                n * n,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().flatten().find(|&&w| w >= space.len()) {
            return Err(Error::InvalidGraph(format!(
                "weight index {w} out of range"
            )));
        }
        for i in 0..n {
            if let Some(w) = weights[i * n + i] {
                if Some(w) != space.cemetery() {
                    return Err(Error::InvalidGraph(format!(
                        "diagonal entry ({i}, {i}) must be the cemetery or empty"
                    )));
                }
            }
        }
        if symmetric && (0..n).any(|i| (0..i).any(|j| weights[i * n + j] != weights[j * n + i])) {
            return Err(Error::InvalidGraph(
                "graph flagged symmetric has asymmetric weights".into(),
            ));
        }
        Ok(SampledGraph {
            space,
            n,
            weights,
            symmetric,
        })
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> Option<usize> {
        self.weights[i * self.n + j]
    }

    /// Weight with missing entries (including the diagonal) read as the
    /// cemetery point.
    pub fn weight_or_cemetery(&self, i: usize, j: usize) -> Result<usize> {
        self.weight(i, j).or(self.space.cemetery()).ok_or_else(|| {
            Error::InvalidGraph(format!(
                "edge ({i}, {j}) is missing and the space has no cemetery point"
            ))
        })
    }

    pub fn weights(&self) -> &[Option<usize>] {
        &self.weights
    }

    /// Induced subgraph on `vertices`, in that order.
    pub fn induced(&self, vertices: &[usize]) -> SampledGraph {
        let k = vertices.len();
        let mut weights = Vec::with_capacity(k * k);
        for &a in vertices {
            for &b in vertices {
                weights.push(self.weight(a, b));
            }
        }
        SampledGraph {
            space: self.space.clone(),
            n: k,
            weights,
            symmetric: self.symmetric,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = WeightSpace::uniform(3, 1.0)
            .unwrap()
            .with_cemetery(Some(2))
            .unwrap()
            .shared();
        assert!(SampledGraph::new(s.clone(), 2, vec![None, Some(0), Some(1), None], false).is_ok());
        assert!(
            SampledGraph::new(s.clone(), 2, vec![Some(2), Some(0), Some(1), None], false).is_ok()
        );
        assert!(
            SampledGraph::new(s.clone(), 2, vec![Some(0), Some(0), Some(1), None], false).is_err()
        );
        assert!(SampledGraph::new(s.clone(), 2, vec![None, Some(0), Some(1), None], true).is_err());
        assert!(
            SampledGraph::new(s.clone(), 2, vec![None, Some(5), Some(1), None], false).is_err()
        );
        let g = SampledGraph::new(s.clone(), 2, vec![None, Some(0), Some(1), None], false).unwrap();
        assert_eq!(g.weight_or_cemetery(0, 0).unwrap(), 2);
        assert_eq!(g.induced(&[1, 0]).weight(0, 1), Some(1));
    }
}
