//! Dense tableau simplex for small problems of the form
//! `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The origin is feasible under these assumptions, so no phase one is
//! needed. Entering and leaving variables follow Bland's rule, which rules
//! out cycling on degenerate vertices.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::Lp("inconsistent dimensions".into()));
    }
    if b.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Lp(
            "right-hand side must be finite and nonnegative".into(),
        ));
    }
    let width = n + m;
    // row-major tableau without the objective row
    let mut t = vec![0.0; m * width];
    let mut rhs = b.to_vec();
    for i in 0..m {
        t[i * width..i * width + n].copy_from_slice(&a[i]);
        t[i * width + n + i] = 1.0;
    }
    let mut reduced: Vec<f64> = c
        .iter()
        .copied()
        .chain(std::iter::repeat_n(0.0, m))
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iter = 50 * (width + 1) * (m + 1) + 1000;
    for _ in 0..max_iter {
        let Some(enter) = (0..width).find(|&j| reduced[j] > PIVOT_TOL) else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = rhs[i];
                }
            }
            let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
            return Ok(LpSolution { value, x });
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a_ie = t[i * width + enter];
            if a_ie > PIVOT_TOL {
                let ratio = rhs[i] / a_ie;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - 1e-15
                            || (ratio <= best_ratio + 1e-15 && basis[i] < basis[l])
                    }
                };
                if better {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(Error::Lp("problem is unbounded".into()));
        };
        pivot(&mut t, &mut rhs, &mut reduced, width, r, enter);
        basis[r] = enter;
    }
    Err(Error::Lp("iteration limit reached".into()))
}

fn pivot(t: &mut [f64], rhs: &mut [f64], reduced: &mut [f64], width: usize, r: usize, e: usize) {
    let m = rhs.len();
    let p = t[r * width + e];
    for j in 0..width {
        t[r * width + j] /= p;
    }
    rhs[r] /= p;
    t[r * width + e] = 1.0;
    let (pivot_row, pivot_rhs) = (t[r * width..(r + 1) * width].to_vec(), rhs[r]);
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = t[i * width + e];
        if f != 0.0 {
            for j in 0..width {
                t[i * width + j] -= f * pivot_row[j];
            }
            t[i * width + e] = 0.0;
            rhs[i] = (rhs[i] - f * pivot_rhs).max(0.0);
        }
    }
    let f = reduced[e];
    for j in 0..width {
        reduced[j] -= f * pivot_row[j];
    }
    reduced[e] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let sol = maximize(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        )
        .unwrap();
        assert!((sol.value - 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_unbounded() {
        // degenerate vertex at the origin
        let sol = maximize(
            &[1.0, 1.0],
            &[vec![1.0, -1.0], vec![-1.0, 1.0], vec![1.0, 1.0]],
            &[0.0, 0.0, 2.0],
        )
        .unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
        assert!(maximize(&[1.0], &[vec![-1.0]], &[1.0]).is_err());
        assert!(maximize(&[1.0], &[vec![1.0]], &[-1.0]).is_err());
    }

    #[test]
    fn zero_objective() {
        let sol = maximize(&[0.0, 0.0], &[vec![1.0, 1.0]], &[1.0]).unwrap();
        assert_eq!(sol.value, 0.0);
    }
}
