//! Pareto dominance with constraint handling, and front ranking.

use crate::problem::Fitness;

/// Plain Pareto dominance for minimization: no worse everywhere, better somewhere.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Feasible beats infeasible; between infeasible designs the smaller total
/// violation wins; between feasible designs Pareto dominance decides.
pub fn constrained_dominates(a: &Fitness, b: &Fitness) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.violation < b.violation,
        (true, true) => pareto_dominates(&a.objectives, &b.objectives),
    }
}

/// Fast non-dominated sorting. Returns a 1-based front index per entry;
/// rank 1 is the non-dominated set.
pub fn pareto_rank(fits: &[&Fitness]) -> Vec<usize> {
    let n = fits.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if constrained_dominates(fits[i], fits[j]) {
                dominates[i].push(j);
                dominated_by_count[j] += 1;
            } else if constrained_dominates(fits[j], fits[i]) {
                dominates[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut front: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    let mut level = 1;
    while !front.is_empty() {
        let mut next = Vec::new();
        for &i in &front {
            rank[i] = level;
            for &j in &dominates[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        front = next;
        level += 1;
    }
    rank
}

/// Indices of the entries no other entry dominates.
pub fn non_dominated(fits: &[&Fitness]) -> Vec<usize> {
    (0..fits.len())
        .filter(|&i| !fits.iter().any(|other| constrained_dominates(other, fits[i])))
        .collect()
}
