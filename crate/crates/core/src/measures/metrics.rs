//! Distances and norms on measures over a finite weight space.

use super::family::TestFamily;
use super::lp;
use super::measure::SignedMeasure;
use super::space::WeightSpace;
use crate::error::{Error, Result};

/// Largest space for which the Prohorov distance is computed (2^m subsets).
pub const PROHOROV_MAX_POINTS: usize = 20;

/// Precomputed closed neighbourhoods of a space for the Prohorov distance.
///
/// With `A^eps = {x : d(x, A) < eps}`, the enlargement is constant for
/// `eps` in `(r_l, r_{l+1}]` where `r_0 = 0 < r_1 < ...` are the distinct
/// metric values, and equals the closed `r_l`-neighbourhood of `A`. On that
/// interval the constraints reduce to `eps >= max_A mu(A) - nu(N_l(A))` (and
/// symmetrically), so the infimum is found by sweeping the intervals.
#[derive(Debug, Clone)]
pub struct ProhorovPlan {
    m: usize,
    radii: Vec<f64>,
    // nbhd[l * m + i] = bitmask of points within radii[l] of point i
    nbhd: Vec<u32>,
}

impl ProhorovPlan {
    pub fn new(space: &WeightSpace) -> Result<Self> {
        let m = space.len();
        if m > PROHOROV_MAX_POINTS {
            return Err(Error::CapabilityLimit {
                what: "prohorov distance",
                size: m as u128,
                limit: PROHOROV_MAX_POINTS as u128,
                hint: "use the KR, FM or F norm on larger spaces",
            });
        }
        let mut radii = vec![0.0];
        for i in 0..m {
            for j in 0..m {
                radii.push(space.distance(i, j));
            }
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut nbhd = Vec::with_capacity(radii.len() * m);
        for &r in &radii {
            for i in 0..m {
                let mask = (0..m)
                    .filter(|&j| space.distance(i, j) <= r)
                    .fold(0u32, |acc, j| acc | (1 << j));
                nbhd.push(mask);
            }
        }
        Ok(ProhorovPlan { m, radii, nbhd })
    }

    /// Prohorov distance between two positive mass vectors.
    pub fn distance(&self, mu: &[f64], nu: &[f64]) -> f64 {
        let m = self.m;
        let full = 1usize << m;
        let mu_tab = subset_sums(mu);
        let nu_tab = subset_sums(nu);
        let mut grown = vec![0u32; full];
        for (l, &lo) in self.radii.iter().enumerate() {
            let hi = self.radii.get(l + 1).copied().unwrap_or(f64::INFINITY);
            let nb = &self.nbhd[l * m..(l + 1) * m];
            let mut req = 0.0f64;
            for a in 1..full {
                let low = a.trailing_zeros() as usize;
                grown[a] = grown[a & (a - 1)] | nb[low];
                let g = grown[a] as usize;
                req = req.max(mu_tab[a] - nu_tab[g]).max(nu_tab[a] - mu_tab[g]);
            }
            let candidate = req.max(lo);
            if candidate <= hi {
                return candidate;
            }
        }
        unreachable!("the last interval is unbounded")
    }
}

fn subset_sums(x: &[f64]) -> Vec<f64> {
    let full = 1usize << x.len();
    let mut tab = vec![0.0; full];
    for a in 1..full {
        tab[a] = tab[a & (a - 1)] + x[a.trailing_zeros() as usize];
    }
    tab
}

fn require_positive(mu: &SignedMeasure) -> Result<()> {
    if mu.mass().iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidMeasure(
            "the Prohorov distance needs positive measures".into(),
        ));
    }
    Ok(())
}

/// Prohorov distance between two positive measures on the same space.
pub fn prohorov(mu: &SignedMeasure, nu: &SignedMeasure) -> Result<f64> {
    mu.check_same_space(nu)?;
    require_positive(mu)?;
    require_positive(nu)?;
    Ok(ProhorovPlan::new(mu.space())?.distance(mu.mass(), nu.mass()))
}

/// Linear programs for the Kantorovich-Rubinstein and Fortet-Mourier norms
/// on a fixed space.
///
/// Test functions are shifted by one (`g = f + 1`) so that the origin is a
/// feasible vertex and every right-hand side is nonnegative.
#[derive(Debug, Clone)]
pub struct DualProgram {
    m: usize,
    with_lipschitz: bool,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl DualProgram {
    /// Constraints `|f| <= 1` and `|f(x) - f(y)| <= d(x, y)`.
    pub fn kantorovich_rubinstein(space: &WeightSpace) -> Self {
        let m = space.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..m {
            let mut row = vec![0.0; m];
            row[i] = 1.0;
            a.push(row);
            b.push(2.0);
        }
        for i in 0..m {
            for j in 0..m {
                let d = space.distance(i, j);
                if i != j && d < 2.0 {
                    let mut row = vec![0.0; m];
                    row[i] = 1.0;
                    row[j] = -1.0;
                    a.push(row);
                    b.push(d);
                }
            }
        }
        DualProgram {
            m,
            with_lipschitz: false,
            a,
            b,
        }
    }

    /// Constraints `||f||_inf + L <= 1` and `|f(x) - f(y)| <= L d(x, y)`
    /// with the Lipschitz constant `L` as an extra variable.
    pub fn fortet_mourier(space: &WeightSpace) -> Self {
        let m = space.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..m {
            let mut up = vec![0.0; m + 1];
            up[i] = 1.0;
            up[m] = 1.0;
            a.push(up);
            b.push(2.0);
            let mut down = vec![0.0; m + 1];
            down[i] = -1.0;
            down[m] = 1.0;
            a.push(down);
            b.push(0.0);
        }
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let mut row = vec![0.0; m + 1];
                    row[i] = 1.0;
                    row[j] = -1.0;
                    row[m] = -space.distance(i, j);
                    a.push(row);
                    b.push(0.0);
                }
            }
        }
        DualProgram {
            m,
            with_lipschitz: true,
            a,
            b,
        }
    }

    /// Norm of the signed mass vector and an optimal test function.
    pub fn solve(&self, mass: &[f64]) -> Result<(f64, Vec<f64>)> {
        let total: f64 = mass.iter().sum();
        if mass.iter().all(|&x| x == 0.0) {
            return Ok((0.0, vec![0.0; self.m]));
        }
        let mut c = mass.to_vec();
        if self.with_lipschitz {
            c.push(0.0);
        }
        let sol = lp::maximize(&c, &self.a, &self.b)?;
        let f: Vec<f64> = sol.x[..self.m].iter().map(|g| g - 1.0).collect();
        let value = (sol.value - total).max(0.0);
        Ok((value, f))
    }
}

/// Kantorovich-Rubinstein (bounded Lipschitz) norm.
pub fn kr_norm(mu: &SignedMeasure) -> Result<f64> {
    Ok(DualProgram::kantorovich_rubinstein(mu.space())
        .solve(mu.mass())?
        .0)
}

/// Fortet-Mourier norm.
pub fn fm_norm(mu: &SignedMeasure) -> Result<f64> {
    Ok(DualProgram::fortet_mourier(mu.space()).solve(mu.mass())?.0)
}

/// `sum_k 2^-k |mu(f_k)|` over the test family.
pub fn f_norm(mu: &SignedMeasure, family: &TestFamily) -> Result<f64> {
    family.check_measure(mu)?;
    Ok(family.norm_of(mu.mass()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn two_points(d: f64) -> Arc<WeightSpace> {
        WeightSpace::on_line(&[("a", 0.0), ("b", d)], None)
            .unwrap()
            .shared()
    }

    fn m(space: &Arc<WeightSpace>, mass: &[f64]) -> SignedMeasure {
        SignedMeasure::new(space.clone(), mass.to_vec()).unwrap()
    }

    #[test]
    fn prohorov_examples() {
        let s = two_points(2.0);
        let mu = m(&s, &[1.0, 0.0]);
        assert_eq!(prohorov(&mu, &mu).unwrap(), 0.0);
        let nu = m(&s, &[0.7, 0.3]);
        assert!((prohorov(&mu, &nu).unwrap() - 0.3).abs() < 1e-12);
        let s = two_points(1.0);
        let d = prohorov(&m(&s, &[1.0, 0.0]), &m(&s, &[0.0, 1.0])).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prohorov_rejects_signed_and_large() {
        let s = two_points(1.0);
        assert!(prohorov(&m(&s, &[1.0, -0.1]), &m(&s, &[1.0, 0.0])).is_err());
        let big = WeightSpace::uniform(21, 1.0).unwrap().shared();
        let z = SignedMeasure::zero(big);
        assert!(prohorov(&z, &z).unwrap_err().is_capability_limit());
    }

    #[test]
    fn prohorov_unequal_mass() {
        // positive measures of different totals: the mass gap is a lower bound
        let s = two_points(5.0);
        let d = prohorov(&m(&s, &[0.2, 0.0]), &m(&s, &[0.0, 0.0])).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn kr_examples() {
        let s = two_points(0.5);
        assert!((kr_norm(&m(&s, &[1.0, -1.0])).unwrap() - 0.5).abs() < 1e-9);
        let s = two_points(3.0);
        assert!((kr_norm(&m(&s, &[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(kr_norm(&SignedMeasure::zero(s)).unwrap(), 0.0);
    }

    #[test]
    fn fm_examples() {
        let s = two_points(2.0);
        assert!((fm_norm(&m(&s, &[1.0, -1.0])).unwrap() - 1.0).abs() < 1e-9);
        assert!((fm_norm(&m(&s, &[2.0, -2.0])).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(fm_norm(&SignedMeasure::zero(s)).unwrap(), 0.0);
    }

    #[test]
    fn kr_of_positive_mass_is_total() {
        let s = WeightSpace::uniform(3, 0.4).unwrap().shared();
        let v = kr_norm(&m(&s, &[0.2, 0.3, 0.1])).unwrap();
        assert!((v - 0.6).abs() < 1e-9);
    }

    #[test]
    fn f_norm_examples() {
        let s = two_points(1.0);
        let fam = TestFamily::canonical(s.clone());
        let p = 0.4;
        assert!((f_norm(&m(&s, &[-p, p]), &fam).unwrap() - 0.75 * p).abs() < 1e-15);
        assert_eq!(f_norm(&SignedMeasure::zero(s.clone()), &fam).unwrap(), 0.0);
        assert!((f_norm(&m(&s, &[1.0, 0.0]), &fam).unwrap() - 1.5).abs() < 1e-15);
    }
}
