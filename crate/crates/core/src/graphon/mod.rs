//! Measure-valued stepfunction kernels.

mod ops;

use std::sync::Arc;

pub use ops::{
    compress, embed_real_graphon, equipartition, equipartition_sources, from_weighted_graph,
    marginal_measure, project_onto_classes, refine_common, refine_to, relabel, stepping,
    stepping_onto_classes, BlockPartitionMap,
};

use crate::error::{Error, Result};
use crate::measures::{same_space, MeasureKind, SignedMeasure, WeightSpace};
use crate::partition::Partition;

/// A kernel constant on the rectangles `S_i x S_j` of an interval partition,
/// with a measure on the weight space as value.
///
/// Cells are stored row-major as `k * k` mass vectors of length `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    space: Arc<WeightSpace>,
    partition: Partition,
    cells: Vec<f64>,
    kind: MeasureKind,
    sup_mass: f64,
}

impl StepGraphon {
    pub fn new(
        space: Arc<WeightSpace>,
        partition: Partition,
        cells: Vec<f64>,
        kind: MeasureKind,
    ) -> Result<Self> {
        let k = partition.len();
        let m = space.len();
        if cells.len() != k * k * m {
            return Err(Error::InvalidGraphon(format!(
                "expected {} cell masses for {k} blocks over {m} points, got {}",
                k * k * m,
                cells.len()
            )));
        }
        if cells.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGraphon("cell masses must be finite".into()));
        }
        let mut sup_mass = 0.0f64;
        for (idx, cell) in cells.chunks(m).enumerate() {
            if !kind.admits(cell) {
                return Err(Error::InvalidGraphon(format!(
                    "cell ({}, {}) = {cell:?} is not a {kind:?} measure",
                    idx / k,
                    idx % k
                )));
            }
            sup_mass = sup_mass.max(cell.iter().map(|x| x.abs()).sum());
        }
        Ok(StepGraphon {
            space,
            partition,
            cells,
            kind,
            sup_mass,
        })
    }

    pub fn from_measures(
        partition: Partition,
        cells: &[Vec<SignedMeasure>],
        kind: MeasureKind,
    ) -> Result<Self> {
        let k = partition.len();
        if cells.len() != k || cells.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidGraphon(format!(
                "expected a {k}x{k} matrix of measures"
            )));
        }
        let space = cells[0][0].space().clone();
        let mut flat = Vec::with_capacity(k * k * space.len());
        for mu in cells.iter().flatten() {
            if !same_space(&space, mu.space()) {
                return Err(Error::SpaceMismatch);
            }
            flat.extend_from_slice(mu.mass());
        }
        StepGraphon::new(space, partition, flat, kind)
    }

    /// Build the cells from a closure returning the masses of cell `(i, j)`.
    pub fn from_fn<F>(
        space: Arc<WeightSpace>,
        partition: Partition,
        kind: MeasureKind,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<f64>,
    {
        let k = partition.len();
        let mut flat = Vec::with_capacity(k * k * space.len());
        for i in 0..k {
            for j in 0..k {
                flat.extend(f(i, j));
            }
        }
        StepGraphon::new(space, partition, flat, kind)
    }

    /// The kernel equal to `mu` everywhere.
    pub fn constant(mu: &SignedMeasure, kind: MeasureKind) -> Result<Self> {
        StepGraphon::new(
            mu.space().clone(),
            Partition::trivial(),
            mu.mass().to_vec(),
            kind,
        )
    }

    pub fn zero(space: Arc<WeightSpace>, partition: Partition) -> Self {
        let n = partition.len() * partition.len() * space.len();
        StepGraphon {
            space,
            partition,
            cells: vec![0.0; n],
            kind: MeasureKind::Signed,
            sup_mass: 0.0,
        }
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.partition.len()
    }

    /// Number of weight points.
    pub fn m(&self) -> usize {
        self.space.len()
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// `||W||_inf`, the largest total variation of a cell.
    pub fn sup_mass(&self) -> f64 {
        self.sup_mass
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let m = self.m();
        let off = (i * self.k() + j) * m;
        &self.cells[off..off + m]
    }

    pub fn cell_measure(&self, i: usize, j: usize) -> SignedMeasure {
        SignedMeasure::new(self.space.clone(), self.cell(i, j).to_vec()).expect("cells are finite")
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Relax the kind flag (e.g. to treat a probability-graphon as signed).
    pub fn with_kind(&self, kind: MeasureKind) -> Result<Self> {
        StepGraphon::new(
            self.space.clone(),
            self.partition.clone(),
            self.cells.clone(),
            kind,
        )
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.k();
        (0..k).all(|i| (0..i).all(|j| self.cell(i, j) == self.cell(j, i)))
    }

    /// `self - other` for kernels on the same partition.
    pub fn difference(&self, other: &StepGraphon) -> Result<StepGraphon> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        if self.partition != other.partition {
            return Err(Error::InvalidPartition(
                "difference needs identical partitions; refine first".into(),
            ));
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a - b)
            .collect();
        StepGraphon::new(
            self.space.clone(),
            self.partition.clone(),
            cells,
            MeasureKind::Signed,
        )
    }

    /// `self - other` after refining both to their common partition.
    pub fn minus(&self, other: &StepGraphon) -> Result<StepGraphon> {
        let (a, b) = refine_common(self, other)?;
        a.difference(&b)
    }

    /// `W[f]`, the real-valued kernel `(i, j) -> W(i, j; f)`, row-major.
    pub fn integrate(&self, f: &[f64]) -> Vec<f64> {
        self.cells
            .chunks(self.m())
            .map(|c| c.iter().zip(f).map(|(a, b)| a * b).sum())
            .collect()
    }
}
