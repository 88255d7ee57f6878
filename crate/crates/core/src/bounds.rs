use serde::{Deserialize, Serialize};

/// Axis-aligned box of per-variable `[lower, upper]` limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    /// Panics if the slices disagree in length or any interval is inverted.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound vectors differ in length");
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            assert!(lo <= hi, "variable {i}: lower bound {lo} exceeds upper bound {hi}");
        }
        Self { lower, upper }
    }

    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Self {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn span(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn in_bounds(&self, i: usize, v: f64) -> bool {
        v >= self.lower[i] && v <= self.upper[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().enumerate().all(|(i, &v)| self.in_bounds(i, v))
    }

    /// Maps variable `i` into `[0, 1]`; fixed variables map to 0.
    pub fn normalize(&self, i: usize, v: f64) -> f64 {
        let span = self.span(i);
        if span > 0.0 {
            (v - self.lower[i]) / span
        } else {
            0.0
        }
    }
}
