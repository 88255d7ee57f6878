//! Analytic bi-objective test problems with known Pareto fronts, and the
//! front-quality metrics used to score optimizer output against them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Bounds;
use crate::problem::{Fitness, Problem};

/// Points per analytic front sample.
pub const FRONT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("front is empty")]
    EmptyFront,
    #[error("reference point ({0}, {1}) does not bound front member ({2}, {3})")]
    ReferenceInsideFront(f64, f64, f64, f64),
    #[error("unknown benchmark `{0}` (expected sch, zdt1 or zdt2)")]
    UnknownBenchmark(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    Sch,
    Zdt1,
    Zdt2,
}

impl BenchmarkKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sch => "sch",
            Self::Zdt1 => "zdt1",
            Self::Zdt2 => "zdt2",
        }
    }

    pub fn parse(s: &str) -> Result<Self, MetricError> {
        match s.to_ascii_lowercase().as_str() {
            "sch" => Ok(Self::Sch),
            "zdt1" => Ok(Self::Zdt1),
            "zdt2" => Ok(Self::Zdt2),
            _ => Err(MetricError::UnknownBenchmark(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    kind: BenchmarkKind,
    bounds: Bounds,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind) -> Self {
        let bounds = match kind {
            BenchmarkKind::Sch => Bounds::uniform(1, -3.0, 3.0),
            BenchmarkKind::Zdt1 | BenchmarkKind::Zdt2 => Bounds::uniform(30, 0.0, 1.0),
        };
        Self { kind, bounds }
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn objectives(&self, x: &[f64]) -> [f64; 2] {
        match self.kind {
            BenchmarkKind::Sch => [x[0] * x[0], (x[0] - 2.0).powi(2)],
            BenchmarkKind::Zdt1 | BenchmarkKind::Zdt2 => {
                let f1 = x[0];
                let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
                let ratio = f1 / g;
                let h = match self.kind {
                    BenchmarkKind::Zdt1 => 1.0 - ratio.sqrt(),
                    _ => 1.0 - ratio * ratio,
                };
                [f1, g * h]
            }
        }
    }

    /// `n` points of the analytic front, uniform in the front parameter
    /// (`x` on [0, 2] for SCH, `f1` on [0, 1] for ZDT).
    pub fn analytic_front(&self, n: usize) -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| {
                let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                match self.kind {
                    BenchmarkKind::Sch => {
                        let x = 2.0 * t;
                        [x * x, (x - 2.0).powi(2)]
                    }
                    BenchmarkKind::Zdt1 => [t, 1.0 - t.sqrt()],
                    BenchmarkKind::Zdt2 => [t, 1.0 - t * t],
                }
            })
            .collect()
    }

    pub fn hypervolume_reference(&self) -> [f64; 2] {
        match self.kind {
            BenchmarkKind::Sch => [5.0, 5.0],
            _ => [1.1, 1.1],
        }
    }
}

impl Problem for Benchmark {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        Fitness::feasible(self.objectives(x).to_vec())
    }

    fn reference_point(&self) -> Option<Vec<f64>> {
        Some(self.hypervolume_reference().to_vec())
    }
}

/// Mean distance from each analytic sample to its nearest front member.
pub fn igd(front: &[[f64; 2]], samples: &[[f64; 2]]) -> Result<f64, MetricError> {
    if front.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let total: f64 = samples
        .iter()
        .map(|s| {
            front
                .iter()
                .map(|f| (f[0] - s[0]).hypot(f[1] - s[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / samples.len() as f64)
}

/// Area dominated by `front` and bounded by `reference`, both minimized.
/// Every member must be strictly below the reference in both objectives.
pub fn hypervolume2d(front: &[[f64; 2]], reference: [f64; 2]) -> Result<f64, MetricError> {
    if front.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    if let Some(p) = front.iter().find(|p| !(p[0] < reference[0] && p[1] < reference[1])) {
        return Err(MetricError::ReferenceInsideFront(reference[0], reference[1], p[0], p[1]));
    }
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in pts {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    Ok(area)
}
