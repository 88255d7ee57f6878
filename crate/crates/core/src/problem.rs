//! The contract between an optimizer and the problem it searches.

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;

/// Objective values (all minimized) plus total constraint violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub objectives: Vec<f64>,
    /// Sum of positive constraint values; zero means feasible.
    pub violation: f64,
}

impl Fitness {
    pub fn feasible(objectives: Vec<f64>) -> Self {
        Self {
            objectives,
            violation: 0.0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// A bounded, possibly constrained multi-objective minimization problem.
pub trait Problem: Sync {
    fn bounds(&self) -> &Bounds;

    /// Called only with in-bounds positions.
    fn evaluate(&self, x: &[f64]) -> Fitness;

    fn objective_count(&self) -> usize {
        2
    }

    /// Reference point for hypervolume reporting, if the problem has one.
    fn reference_point(&self) -> Option<Vec<f64>> {
        None
    }
}
