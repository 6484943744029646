use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::space::{same_space, WeightSpace};
use crate::error::{Error, Result};

/// Tolerance on the total mass of (sub-)probability measures.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Constraint classes of measures, from the widest to the narrowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Signed,
    Positive,
    SubProbability,
    Probability,
}

impl MeasureKind {
    pub fn admits(self, mass: &[f64]) -> bool {
        let positive = mass.iter().all(|&x| x >= 0.0);
        let total: f64 = mass.iter().sum();
        match self {
            MeasureKind::Signed => true,
            MeasureKind::Positive => positive,
            MeasureKind::SubProbability => positive && total <= 1.0 + PROBABILITY_TOL,
            MeasureKind::Probability => positive && (total - 1.0).abs() <= PROBABILITY_TOL,
        }
    }

    /// Narrowest kind admitting `mass`.
    pub fn classify(mass: &[f64]) -> Self {
        [
            MeasureKind::Probability,
            MeasureKind::SubProbability,
            MeasureKind::Positive,
        ]
        .into_iter()
        .find(|k| k.admits(mass))
        .unwrap_or(MeasureKind::Signed)
    }
}

/// A signed measure on a finite weight space, stored as one mass per point.
///
/// On a finite space the Hahn-Jordan decomposition is the sign split of the
/// mass vector, so the positive and negative parts are always mutually
/// singular.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure {
    space: Arc<WeightSpace>,
    mass: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(space: Arc<WeightSpace>, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "expected {} masses, got {}",
                space.len(),
                mass.len()
            )));
        }
        if let Some(x) = mass.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure(format!("mass {x} is not finite")));
        }
        Ok(SignedMeasure { space, mass })
    }

    /// Like [`SignedMeasure::new`] but also checks membership in `kind`.
    pub fn with_kind(space: Arc<WeightSpace>, mass: Vec<f64>, kind: MeasureKind) -> Result<Self> {
        let mu = SignedMeasure::new(space, mass)?;
        if !kind.admits(&mu.mass) {
            return Err(Error::InvalidMeasure(format!(
                "masses {:?} do not form a {kind:?} measure",
                mu.mass
            )));
        }
        Ok(mu)
    }

    pub fn probability(space: Arc<WeightSpace>, mass: Vec<f64>) -> Result<Self> {
        SignedMeasure::with_kind(space, mass, MeasureKind::Probability)
    }

    pub fn zero(space: Arc<WeightSpace>) -> Self {
        let m = space.len();
        SignedMeasure {
            space,
            mass: vec![0.0; m],
        }
    }

    pub fn dirac(space: Arc<WeightSpace>, point: usize) -> Self {
        let mut mu = SignedMeasure::zero(space);
        mu.mass[point] = 1.0;
        mu
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<f64> {
        self.mass
    }

    pub fn kind(&self) -> MeasureKind {
        MeasureKind::classify(&self.mass)
    }

    /// `(mu+, mu-)` with `mu = mu+ - mu-`.
    pub fn hahn_jordan(&self) -> (SignedMeasure, SignedMeasure) {
        let pos = self.mass.iter().map(|&x| x.max(0.0)).collect();
        let neg = self.mass.iter().map(|&x| (-x).max(0.0)).collect();
        (
            SignedMeasure {
                space: self.space.clone(),
                mass: pos,
            },
            SignedMeasure {
                space: self.space.clone(),
                mass: neg,
            },
        )
    }

    /// `|mu|`, the total variation measure.
    pub fn abs(&self) -> SignedMeasure {
        SignedMeasure {
            space: self.space.clone(),
            mass: self.mass.iter().map(|x| x.abs()).collect(),
        }
    }

    /// Total variation norm `mu+(Z) + mu-(Z)`.
    pub fn total_mass(&self) -> f64 {
        self.mass.iter().map(|x| x.abs()).sum()
    }

    /// Signed total `mu(Z)`.
    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `mu(f)` for a function given by its values on the points.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.mass.iter().zip(f).map(|(m, v)| m * v).sum()
    }

    pub fn check_same_space(&self, other: &SignedMeasure) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn sub(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        self.check_same_space(other)?;
        Ok(SignedMeasure {
            space: self.space.clone(),
            mass: self
                .mass
                .iter()
                .zip(&other.mass)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        self.check_same_space(other)?;
        Ok(SignedMeasure {
            space: self.space.clone(),
            mass: self
                .mass
                .iter()
                .zip(&other.mass)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> SignedMeasure {
        SignedMeasure {
            space: self.space.clone(),
            mass: self.mass.iter().map(|x| c * x).collect(),
        }
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &SignedMeasure, alpha: f64) -> Result<SignedMeasure> {
        self.check_same_space(other)?;
        Ok(SignedMeasure {
            space: self.space.clone(),
            mass: self
                .mass
                .iter()
                .zip(&other.mass)
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect(),
        })
    }
}
