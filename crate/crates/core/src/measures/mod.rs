//! Measures on finite weight spaces and the distances the cut metrics are
//! built from.

pub mod family;
pub mod lp;
pub mod measure;
pub mod metrics;
pub mod space;

pub use family::TestFamily;
pub use measure::{MeasureKind, SignedMeasure, PROBABILITY_TOL};
pub use metrics::{f_norm, fm_norm, kr_norm, prohorov, DualProgram, ProhorovPlan};
pub use space::{same_space, WeightSpace};
