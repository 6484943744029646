//! Probability-graphons over finite weight spaces.
//!
//! A probability-graphon assigns a measure on a weight space `Z` to every
//! pair of points of `[0, 1]`. This crate works with step functions on
//! exact rational partitions and a finite `Z` with an explicit metric, where
//! every quantity below can be computed exactly or bounded rigorously:
//!
//! - [`measures`]: Prohorov, Kantorovich-Rubinstein, Fortet-Mourier and
//!   F-norm distances between measures.
//! - [`graphon`]: step graphons, stepping, relabeling, refinement.
//! - [`cutmetric`]: cut norms, labeled cut distances, the minimum over
//!   relabelings, and weak regularity partitions.
//! - [`sampling`]: W-random measure graphs and weighted graphs.
//! - [`homdensity`]: homomorphism densities of decorated graphs.
//! - [`harness`]: randomized checks of the quantitative lemmas, reported as
//!   CSV rows.
//!
//! The `pgraphon` binary exposes the same operations on JSON files; see
//! [`cli`].
//!
//! ```
//! use pgraphon::cutmetric::{cut_norm_exact, Metric};
//! use pgraphon::graphon::StepGraphon;
//! use pgraphon::measures::{MeasureKind, TestFamily, WeightSpace};
//! use pgraphon::partition::Partition;
//!
//! let space = WeightSpace::binary().shared();
//! let d = StepGraphon::from_fn(space.clone(), Partition::uniform(2), MeasureKind::Signed, |i, j| {
//!     let s = if i == j { 0.2 } else { -0.2 };
//!     vec![-s, s]
//! })
//! .unwrap();
//! let wit = cut_norm_exact(&d, &Metric::FNorm(TestFamily::canonical(space))).unwrap();
//! assert!((wit.value - 0.0375).abs() < 1e-15);
//! ```

pub mod cli;
pub mod cutmetric;
pub mod error;
pub mod graphon;
pub mod graphs;
pub mod harness;
pub mod homdensity;
pub mod io;
pub mod measures;
pub mod partition;
pub mod random;
pub mod sampling;

pub use error::{Error, Result};
