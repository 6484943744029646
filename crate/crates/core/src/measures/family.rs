use std::sync::Arc;

use super::measure::SignedMeasure;
use super::space::{same_space, WeightSpace};
use crate::error::{Error, Result};

/// A finite convergence-determining family `(f_0 = 1, f_1, ..., f_N)` of
/// functions with values in `[0, 1]`; `f_k` carries the weight `2^-k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    space: Arc<WeightSpace>,
    functions: Vec<Vec<f64>>,
}

impl TestFamily {
    pub fn new(space: Arc<WeightSpace>, functions: Vec<Vec<f64>>) -> Result<Self> {
        let m = space.len();
        let first = functions
            .first()
            .ok_or_else(|| Error::InvalidFamily("the family is empty".into()))?;
        if first.iter().any(|&v| v != 1.0) {
            return Err(Error::InvalidFamily(
                "the first function must be identically 1".into(),
            ));
        }
        for (k, f) in functions.iter().enumerate() {
            if f.len() != m {
                return Err(Error::InvalidFamily(format!(
                    "f_{k} has {} values, expected {m}",
                    f.len()
                )));
            }
            if f.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidFamily(format!("f_{k} leaves [0, 1]")));
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                if functions.iter().all(|f| f[a] == f[b]) {
                    return Err(Error::InvalidFamily(format!(
                        "points {a} and {b} are not separated"
                    )));
                }
            }
        }
        Ok(TestFamily { space, functions })
    }

    /// `(1, 1_{z_1}, ..., 1_{z_m})`.
    pub fn canonical(space: Arc<WeightSpace>) -> Self {
        let m = space.len();
        let mut functions = vec![vec![1.0; m]];
        functions.extend((0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
        TestFamily { space, functions }
    }

    pub fn space(&self) -> &Arc<WeightSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[Vec<f64>] {
        &self.functions
    }

    pub fn function(&self, k: usize) -> &[f64] {
        &self.functions[k]
    }

    #[inline]
    pub fn weight(k: usize) -> f64 {
        0.5f64.powi(k as i32)
    }

    /// `(mu(f_k))_k` for raw masses.
    pub fn project(&self, mass: &[f64]) -> Vec<f64> {
        self.functions
            .iter()
            .map(|f| f.iter().zip(mass).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `sum_k 2^-k |mu(f_k)|` for raw masses.
    pub fn norm_of(&self, mass: &[f64]) -> f64 {
        self.functions
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let v: f64 = f.iter().zip(mass).map(|(a, b)| a * b).sum();
                TestFamily::weight(k) * v.abs()
            })
            .sum()
    }

    /// `sum_k 2^-k eps_k f_k`, the dual function attaining the norm for a
    /// sign pattern.
    pub fn signed_combination(&self, signs: &[i8]) -> Vec<f64> {
        let m = self.space.len();
        let mut g = vec![0.0; m];
        for (k, (f, &s)) in self.functions.iter().zip(signs).enumerate() {
            let w = TestFamily::weight(k) * s as f64;
            for z in 0..m {
                g[z] += w * f[z];
            }
        }
        g
    }

    pub fn check_measure(&self, mu: &SignedMeasure) -> Result<()> {
        if same_space(&self.space, mu.space()) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = WeightSpace::uniform(2, 1.0).unwrap().shared();
        assert!(TestFamily::new(s.clone(), vec![]).is_err());
        assert!(TestFamily::new(s.clone(), vec![vec![1.0, 0.5]]).is_err());
        assert!(TestFamily::new(s.clone(), vec![vec![1.0, 1.0]]).is_err());
        assert!(TestFamily::new(s.clone(), vec![vec![1.0, 1.0], vec![0.0, 1.5]]).is_err());
        assert!(TestFamily::new(s.clone(), vec![vec![1.0, 1.0], vec![0.2, 0.7]]).is_ok());
        let c = TestFamily::canonical(s);
        assert_eq!(c.len(), 3);
        assert_eq!(c.function(2), &[0.0, 1.0]);
    }
}
