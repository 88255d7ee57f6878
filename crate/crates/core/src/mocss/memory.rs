//! The charged memory: a bounded archive of mutually non-dominated designs.

use serde::{Deserialize, Serialize};

use super::rank::{constrained_dominates, non_dominated};
use crate::problem::Fitness;

/// An evaluated design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub fitness: Fitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargedMemory {
    members: Vec<Candidate>,
    capacity: usize,
}

impl ChargedMemory {
    /// `capacity` must be at least 2 so both extreme points fit.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 2, "charged memory capacity must be at least 2");
        Self {
            members: Vec::new(),
            capacity,
        }
    }

    pub fn members(&self) -> &[Candidate] {
        &self.members
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<Candidate> {
        self.members
    }

    /// Merges `candidates` into the memory, keeps the non-dominated union and
    /// prunes it back to capacity by closest-pair deletion under distances
    /// weighted with `alpha`-anchored objective scales.
    pub fn update(&mut self, candidates: impl IntoIterator<Item = Candidate>, alpha: f64) {
        let mut union = std::mem::take(&mut self.members);
        union.extend(candidates);
        let keep = {
            let fits: Vec<&Fitness> = union.iter().map(|c| &c.fitness).collect();
            non_dominated(&fits)
        };
        let mut kept: Vec<Candidate> = Vec::with_capacity(keep.len());
        let mut it = keep.into_iter().peekable();
        for (i, c) in union.into_iter().enumerate() {
            if it.peek() == Some(&i) {
                it.next();
                kept.push(c);
            }
        }
        if kept.len() > self.capacity {
            let fits: Vec<&[f64]> = kept.iter().map(|c| c.fitness.objectives.as_slice()).collect();
            let weights = objective_weights(&fits, alpha);
            let survivors = prune(&fits, &weights, self.capacity);
            let mut flags = vec![false; kept.len()];
            for i in survivors {
                flags[i] = true;
            }
            kept = kept
                .into_iter()
                .zip(flags)
                .filter_map(|(c, f)| f.then_some(c))
                .collect();
        }
        self.members = kept;
    }

    /// True when no member dominates another.
    pub fn is_pure(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !constrained_dominates(&a.fitness, &b.fitness))
        })
    }
}

/// Per-objective distance weights. The first weight is `alpha`; each next one
/// rescales by the ratio of consecutive worst values so that every weighted
/// objective spans a comparable range. Zero or non-finite worst values fall
/// back to the objective's range, then to 1.
pub fn objective_weights(fits: &[&[f64]], alpha: f64) -> Vec<f64> {
    let m = fits.first().map_or(0, |f| f.len());
    let scale: Vec<f64> = (0..m)
        .map(|k| {
            let (lo, hi) = fits.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
                (lo.min(f[k]), hi.max(f[k]))
            });
            [hi.abs(), hi - lo]
                .into_iter()
                .find(|s| s.is_finite() && *s > 1e-12)
                .unwrap_or(1.0)
        })
        .collect();
    let mut u = Vec::with_capacity(m);
    for k in 0..m {
        u.push(if k == 0 { alpha } else { u[k - 1] * scale[k - 1] / scale[k] });
    }
    u
}

pub fn weighted_distance(a: &[f64], b: &[f64], u: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(u)
        .map(|((x, y), w)| (w * (x - y)).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Indices of the `capacity` survivors of closest-pair deletion. Of the
/// closest pair, the member nearer to its other neighbours goes, unless it
/// is the best point of some objective; those are never deleted.
pub fn prune(fits: &[&[f64]], u: &[f64], capacity: usize) -> Vec<usize> {
    let n = fits.len();
    if n <= capacity {
        return (0..n).collect();
    }
    let m = u.len();
    let mut protected = vec![false; n];
    for k in 0..m {
        let best = (0..n)
            .min_by(|&a, &b| fits[a][k].total_cmp(&fits[b][k]))
            .expect("non-empty");
        protected[best] = true;
    }
    let dist = |i: usize, j: usize| weighted_distance(fits[i], fits[j], u);
    let mut alive = vec![true; n];
    // nearest alive neighbour per member, refreshed lazily as members go
    let nearest = |i: usize, alive: &[bool], skip: Option<usize>| -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in 0..n {
            if j != i && alive[j] && Some(j) != skip {
                let d = dist(i, j);
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        best
    };
    let mut nn: Vec<(usize, f64)> = (0..n).map(|i| nearest(i, &alive, None)).collect();
    let mut count = n;
    while count > capacity {
        let mut pair: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if !alive[i] || (protected[i] && protected[nn[i].0]) {
                continue;
            }
            let (j, d) = nn[i];
            if pair.is_none_or(|(_, _, pd)| d < pd) {
                pair = Some((i.min(j), i.max(j), d));
            }
        }
        let Some((a, b, _)) = pair else { break };
        let victim = match (protected[a], protected[b]) {
            (true, false) => b,
            (false, true) => a,
            _ => {
                let da = nearest(a, &alive, Some(b)).1;
                let db = nearest(b, &alive, Some(a)).1;
                if db < da {
                    b
                } else {
                    a
                }
            }
        };
        alive[victim] = false;
        count -= 1;
        for i in 0..n {
            if alive[i] && nn[i].0 == victim {
                nn[i] = nearest(i, &alive, None);
            }
        }
    }
    (0..n).filter(|&i| alive[i]).collect()
}
