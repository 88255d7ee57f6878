//! Tournament decision making: ranks a finite Pareto set by a weighted
//! geometric aggregate of per-objective win ratios.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the weight sum.
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MtdmError {
    #[error("a tournament needs at least two alternatives, got {0}")]
    TooFewAlternatives(usize),
    #[error("scenario `{name}`: {reason}")]
    InvalidScenario { name: String, reason: String },
    #[error("scenario `{name}` has {weights} weights for {objectives} objectives")]
    WeightCount {
        name: String,
        weights: usize,
        objectives: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub weights: Vec<f64>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, weights: Vec<f64>) -> Result<Self, MtdmError> {
        let s = Self {
            name: name.into(),
            weights,
        };
        s.validate()?;
        Ok(s)
    }

    /// Weights must be positive and sum to one.
    pub fn validate(&self) -> Result<(), MtdmError> {
        let bad = |reason: String| MtdmError::InvalidScenario {
            name: self.name.clone(),
            reason,
        };
        if self.weights.is_empty() {
            return Err(bad("no weights".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(bad(format!("weight {w} is not positive")));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(bad(format!("weights sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Five scenarios sweeping priority from volume to safety.
    pub fn sweep() -> Vec<Scenario> {
        ["A", "B", "C", "D", "E"]
            .into_iter()
            .zip([0.9, 0.7, 0.5, 0.3, 0.1])
            .map(|(n, w)| Scenario {
                name: n.to_string(),
                weights: vec![w, 1.0 - w],
            })
            .collect()
    }
}

/// 1 when `a` is strictly better than `b` on objective `i`.
pub fn tournament_t(a: &[f64], b: &[f64], i: usize) -> u8 {
    u8::from(b[i] - a[i] > 0.0)
}

/// Share of the other alternatives that `set[a]` beats on objective `i`.
pub fn tournament_ratio(a: usize, set: &[Vec<f64>], i: usize) -> Result<f64, MtdmError> {
    if set.len() < 2 {
        return Err(MtdmError::TooFewAlternatives(set.len()));
    }
    let wins: usize = set
        .iter()
        .enumerate()
        .filter(|(b, _)| *b != a)
        .map(|(_, b)| usize::from(tournament_t(&set[a], b, i)))
        .sum();
    Ok(wins as f64 / (set.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ranked {
    /// Position of the alternative in the input set.
    pub index: usize,
    pub r: f64,
}

/// Global score of every alternative, best first. Ties are broken by the
/// lower last objective, then the lower first, then input order.
pub fn rank_r(set: &[Vec<f64>], scenario: &Scenario) -> Result<Vec<Ranked>, MtdmError> {
    scenario.validate()?;
    if set.len() < 2 {
        return Err(MtdmError::TooFewAlternatives(set.len()));
    }
    let n_obj = scenario.weights.len();
    if let Some(bad) = set.iter().find(|f| f.len() != n_obj) {
        return Err(MtdmError::WeightCount {
            name: scenario.name.clone(),
            weights: n_obj,
            objectives: bad.len(),
        });
    }
    let mut out = Vec::with_capacity(set.len());
    for a in 0..set.len() {
        let mut prod = 1.0;
        for (i, w) in scenario.weights.iter().enumerate() {
            prod *= tournament_ratio(a, set, i)?.powf(*w);
        }
        out.push(Ranked {
            index: a,
            r: prod.powf(1.0 / n_obj as f64),
        });
    }
    out.sort_by(|x, y| {
        let (fx, fy) = (&set[x.index], &set[y.index]);
        y.r.total_cmp(&x.r)
            .then(fx[n_obj - 1].total_cmp(&fy[n_obj - 1]))
            .then(fx[0].total_cmp(&fy[0]))
            .then(x.index.cmp(&y.index))
    });
    Ok(out)
}

/// Indices of alternatives that are feasible with a non-positive failure
/// margin (the second objective).
pub fn acceptable(objectives: &[Vec<f64>], feasible: &[bool]) -> Vec<usize> {
    objectives
        .iter()
        .zip(feasible)
        .enumerate()
        .filter(|(_, (f, ok))| **ok && f[1] <= 0.0)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> Vec<Vec<f64>> {
        vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]]
    }

    #[test]
    fn pairwise_tournament() {
        assert_eq!(tournament_t(&[1.0], &[2.0], 0), 1);
        assert_eq!(tournament_t(&[1.0], &[1.0], 0), 0);
        assert_eq!(tournament_t(&[2.0], &[1.0], 0), 0);
    }

    #[test]
    fn win_ratios() {
        let s = three();
        assert_eq!(tournament_ratio(0, &s, 0).unwrap(), 1.0);
        assert_eq!(tournament_ratio(2, &s, 0).unwrap(), 0.0);
        assert_eq!(tournament_ratio(1, &s, 0).unwrap(), 0.5);
        assert!(tournament_ratio(0, &s[..1], 0).is_err());
    }

    #[test]
    fn three_point_example() {
        let sc = Scenario::new("C", vec![0.5, 0.5]).unwrap();
        let r = rank_r(&three(), &sc).unwrap();
        assert_eq!(r[0].index, 1);
        assert!((r[0].r - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(r[1].r == 0.0 && r[2].r == 0.0);
        // tie between the extremes goes to the lower second objective
        assert_eq!(r[1].index, 2);
    }

    #[test]
    fn dominant_alternative_scores_one() {
        let s = vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![2.0, 1.0]];
        let r = rank_r(&s, &Scenario::new("x", vec![0.3, 0.7]).unwrap()).unwrap();
        assert_eq!((r[0].index, r[0].r), (0, 1.0));
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::new("a", vec![0.5, 0.6]).is_err());
        assert!(Scenario::new("a", vec![1.0, 0.0]).is_err());
        assert!(Scenario::new("a", vec![]).is_err());
        for s in Scenario::sweep() {
            s.validate().unwrap();
        }
    }

    #[test]
    fn filter_drops_unsafe_and_infeasible() {
        let objs = vec![vec![1.0, -0.1], vec![1.0, 0.2], vec![1.0, -0.3]];
        assert_eq!(acceptable(&objs, &[true, true, false]), vec![0]);
    }
}
