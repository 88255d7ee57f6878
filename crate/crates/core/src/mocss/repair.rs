//! Harmony-search repair of variables that left their bounds.

use rand::Rng;

use super::memory::Candidate;
use crate::bounds::Bounds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairRates {
    /// Probability of taking the value from a charged-memory member.
    pub cmcr: f64,
    /// Probability of then nudging that value toward a leader.
    pub par: f64,
}

/// Rewrites every out-of-bounds variable of `x`. In-bounds variables are
/// untouched and consume no random numbers. A memory value is pulled a
/// uniform fraction of the way toward the same variable of a random leader
/// (a rank-1 particle). An empty memory falls back to uniform redraws.
pub fn repair_boundary<R: Rng + ?Sized>(
    x: &mut [f64],
    memory: &[Candidate],
    leaders: &[&[f64]],
    bounds: &Bounds,
    rates: RepairRates,
    rng: &mut R,
) {
    for v in 0..x.len() {
        if bounds.in_bounds(v, x[v]) {
            continue;
        }
        let (lo, hi) = (bounds.lower[v], bounds.upper[v]);
        if !memory.is_empty() && rng.gen::<f64>() < rates.cmcr {
            let pick = rng.gen_range(0..memory.len());
            let mut value = memory[pick].position[v];
            if !leaders.is_empty() && rng.gen::<f64>() < rates.par {
                let leader = leaders[rng.gen_range(0..leaders.len())][v];
                value += rng.gen::<f64>() * (leader - value);
            }
            x[v] = value.clamp(lo, hi);
        } else {
            x[v] = lo + rng.gen::<f64>() * (hi - lo);
        }
    }
}
