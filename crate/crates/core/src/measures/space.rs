use std::sync::Arc;

use crate::error::{Error, Result};

const TRIANGLE_TOL: f64 = 1e-12;

/// A finite metric space of edge weights.
///
/// The metric is stored row-major. An optional cemetery point stands for the
/// weight carried by absent edges and by the diagonal of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpace {
    points: Vec<String>,
    metric: Vec<f64>,
    cemetery: Option<usize>,
}

impl WeightSpace {
    pub fn new(
        points: Vec<String>,
        metric: Vec<Vec<f64>>,
        cemetery: Option<usize>,
    ) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::InvalidSpace(
                "a weight space needs at least one point".into(),
            ));
        }
        if metric.len() != m || metric.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidSpace(format!(
                "metric must be a {m}x{m} matrix"
            )));
        }
        if let Some(c) = cemetery {
            if c >= m {
                return Err(Error::InvalidSpace(format!(
                    "cemetery index {c} out of range"
                )));
            }
        }
        for i in 0..m {
            for j in 0..m {
                let d = metric[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidSpace(format!(
                        "d({i},{j}) = {d} is not a finite nonnegative real"
                    )));
                }
                if (i == j) != (d == 0.0) {
                    return Err(Error::InvalidSpace(format!(
                        "d({i},{j}) = {d}: the metric must vanish exactly on the diagonal"
                    )));
                }
                if d != metric[j][i] {
                    return Err(Error::InvalidSpace(format!(
                        "metric is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let lhs = metric[i][k];
                    let rhs = metric[i][j] + metric[j][k];
                    if lhs > rhs + TRIANGLE_TOL * rhs.max(1.0) {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({i},{j},{k}): {lhs} > {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(WeightSpace {
            points,
            metric: metric.into_iter().flatten().collect(),
            cemetery,
        })
    }

    /// Points `0..m` (labelled by their index) with all pairwise distances
    /// equal to `d`.
    pub fn uniform(m: usize, d: f64) -> Result<Self> {
        let points = (0..m).map(|i| i.to_string()).collect();
        let metric = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 0.0 } else { d }).collect())
            .collect();
        WeightSpace::new(points, metric, None)
    }

    /// Labelled points on the real line with the distance `|x - y|`.
    pub fn on_line(points: &[(&str, f64)], cemetery: Option<usize>) -> Result<Self> {
        let labels = points.iter().map(|(l, _)| l.to_string()).collect();
        let metric = points
            .iter()
            .map(|(_, x)| points.iter().map(|(_, y)| (x - y).abs()).collect())
            .collect();
        WeightSpace::new(labels, metric, cemetery)
    }

    /// The two-point space `{"0", "1"}` at distance 1, home of real-valued
    /// graphons.
    pub fn binary() -> Self {
        WeightSpace::on_line(&[("0", 0.0), ("1", 1.0)], None).expect("valid binary space")
    }

    pub fn with_cemetery(mut self, cemetery: Option<usize>) -> Result<Self> {
        if let Some(c) = cemetery {
            if c >= self.len() {
                return Err(Error::InvalidSpace(format!(
                    "cemetery index {c} out of range"
                )));
            }
        }
        self.cemetery = cemetery;
        Ok(self)
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric[i * self.points.len() + j]
    }

    pub fn metric_rows(&self) -> Vec<Vec<f64>> {
        self.metric.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn cemetery(&self) -> Option<usize> {
        self.cemetery
    }
}

/// True when both handles denote the same space (by identity or by value).
pub fn same_space(a: &Arc<WeightSpace>, b: &Arc<WeightSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_broken_triangle() {
        let m = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let pts = vec!["a".into(), "b".into(), "c".into()];
        assert!(matches!(
            WeightSpace::new(pts, m, None),
            Err(Error::InvalidSpace(_))
        ));
    }

    #[test]
    fn rejects_asymmetry_and_zero_distance() {
        let pts = || vec!["a".to_string(), "b".to_string()];
        assert!(WeightSpace::new(pts(), vec![vec![0.0, 1.0], vec![2.0, 0.0]], None).is_err());
        assert!(WeightSpace::new(pts(), vec![vec![0.0, 0.0], vec![0.0, 0.0]], None).is_err());
        assert!(WeightSpace::new(pts(), vec![vec![0.0, 1.0], vec![1.0, 0.0]], Some(2)).is_err());
        assert!(WeightSpace::new(vec![], vec![], None).is_err());
    }

    #[test]
    fn line_space() {
        let s = WeightSpace::on_line(&[("x", 0.0), ("y", 2.5), ("z", -1.0)], Some(2)).unwrap();
        assert_eq!(s.distance(1, 2), 3.5);
        assert_eq!(s.cemetery(), Some(2));
        assert_eq!(s.index_of("y"), Some(1));
    }
}
