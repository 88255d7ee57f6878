//! Multi-objective charged system search.
//!
//! Each iteration: charges from the current objective values, pairwise
//! forces toward better-ranked particles, movement, harmony-search repair of
//! escaped variables, evaluation, ranking and a charged-memory update.
//!
//! Random numbers come from one seeded ChaCha8 stream, drawn in this order:
//! initial positions per particle then per variable; per iteration, for each
//! target particle `j` and each source `i != j` the force-kind and tie draws;
//! then two movement scalars per particle; then repair draws for escaped
//! variables only, particle by particle. Evaluation never touches the stream,
//! so running it in parallel cannot change a run.

mod memory;
mod rank;
mod repair;

pub use memory::{objective_weights, prune, weighted_distance, Candidate, ChargedMemory};
pub use rank::{constrained_dominates, non_dominated, pareto_dominates, pareto_rank};
pub use repair::{repair_boundary, RepairRates};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmarks::hypervolume2d;
use crate::bounds::Bounds;
use crate::problem::{Fitness, Problem};

/// Probability that a pairwise force is attractive.
pub const ATTRACTION_RATE: f64 = 0.8;
/// Probability that an equally ranked particle attracts.
pub const TIE_ATTRACTION_RATE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MocssError {
    #[error("invalid mocss setting `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

/// How the movement coefficients evolve over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `k_a` grows from half its value to its full value, `k_v` shrinks from
    /// half to zero.
    #[default]
    Linear,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n_cps: usize,
    pub max_iters: usize,
    pub k_a: f64,
    pub k_v: f64,
    pub schedule: Schedule,
    /// Radius of the charged sphere in normalized variable space.
    pub radius: f64,
    pub cmcr: f64,
    pub par: f64,
    /// First distance weight of the memory pruning.
    pub alpha: f64,
    pub seed: u64,
    pub archive_capacity: usize,
    /// Evaluate particles on the rayon pool.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_cps: 100,
            max_iters: 200,
            k_a: 2.0,
            k_v: 2.0,
            schedule: Schedule::Linear,
            radius: 1.0,
            cmcr: 0.99,
            par: 0.10,
            alpha: 1.0,
            seed: 0,
            archive_capacity: 100,
            parallel: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), MocssError> {
        let bad = |field, reason: &str| Err(MocssError::InvalidConfig { field, reason: reason.to_string() });
        if self.n_cps < 4 {
            return bad("n_cps", "at least 4 particles are required");
        }
        if self.archive_capacity < 2 {
            return bad("archive_capacity", "must be at least 2");
        }
        for (field, p) in [("cmcr", self.cmcr), ("par", self.par)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(field, "must lie in [0, 1]");
            }
        }
        for (field, v) in [("k_a", self.k_a), ("k_v", self.k_v)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(field, "must be finite and non-negative");
            }
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad("radius", "must be finite and positive");
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad("alpha", "must be finite and positive");
        }
        Ok(())
    }

    /// Movement coefficients `(k_a, k_v)` for the step leaving iteration `it`.
    pub fn coefficients(&self, it: usize) -> (f64, f64) {
        match self.schedule {
            Schedule::Constant => (self.k_a, self.k_v),
            Schedule::Linear => {
                let t = if self.max_iters == 0 { 0.0 } else { it as f64 / self.max_iters as f64 };
                (0.5 * self.k_a * (1.0 + t), 0.5 * self.k_v * (1.0 - t))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargedParticle {
    pub position: Vec<f64>,
    /// Displacement of the last move, in variable units.
    pub velocity: Vec<f64>,
    pub fitness: Fitness,
    pub rank: usize,
    pub charge: f64,
}

/// One line of the iteration log. Minima are over feasible archive members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub archive_size: usize,
    pub fit1_min: Option<f64>,
    pub fit2_min: Option<f64>,
    pub hypervolume: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub memory: ChargedMemory,
    pub population: Vec<ChargedParticle>,
    pub log: Vec<IterationRecord>,
}

fn evaluate_all<P: Problem>(problem: &P, xs: &[Vec<f64>], parallel: bool) -> Vec<Fitness> {
    if parallel {
        xs.par_iter().map(|x| problem.evaluate(x)).collect()
    } else {
        xs.iter().map(|x| problem.evaluate(x)).collect()
    }
}

fn assign_ranks(pop: &mut [ChargedParticle]) {
    let ranks = {
        let fits: Vec<&Fitness> = pop.iter().map(|p| &p.fitness).collect();
        pareto_rank(&fits)
    };
    for (p, r) in pop.iter_mut().zip(ranks) {
        p.rank = r;
    }
}

/// Uniform random positions with zero velocity, evaluated and ranked.
pub fn initialize<P: Problem>(config: &RunConfig, problem: &P, rng: &mut ChaCha8Rng) -> Vec<ChargedParticle> {
    let b = problem.bounds();
    let xs: Vec<Vec<f64>> = (0..config.n_cps)
        .map(|_| (0..b.dim()).map(|v| b.lower[v] + rng.gen::<f64>() * b.span(v)).collect())
        .collect();
    let fits = evaluate_all(problem, &xs, config.parallel);
    let mut pop: Vec<ChargedParticle> = xs
        .into_iter()
        .zip(fits)
        .map(|(position, fitness)| ChargedParticle {
            velocity: vec![0.0; position.len()],
            position,
            fitness,
            rank: 0,
            charge: 0.0,
        })
        .collect();
    assign_ranks(&mut pop);
    pop
}

/// Product over objectives of `(fit - worst) / (best - worst)`; an objective
/// on which all particles agree contributes a factor of 1.
pub fn compute_charges(objectives: &[&[f64]]) -> Vec<f64> {
    let Some(first) = objectives.first() else { return Vec::new() };
    let m = first.len();
    let mut best = vec![f64::INFINITY; m];
    let mut worst = vec![f64::NEG_INFINITY; m];
    for f in objectives {
        for k in 0..m {
            best[k] = best[k].min(f[k]);
            worst[k] = worst[k].max(f[k]);
        }
    }
    objectives
        .iter()
        .map(|f| {
            (0..m)
                .map(|k| {
                    if best[k] == worst[k] {
                        1.0
                    } else {
                        ((f[k] - worst[k]) / (best[k] - worst[k])).clamp(0.0, 1.0)
                    }
                })
                .product()
        })
        .collect()
}

/// Resultant force on every particle, in normalized variable space.
/// `positions` must already be normalized to the unit box.
pub fn compute_forces<R: Rng + ?Sized>(
    positions: &[Vec<f64>],
    charges: &[f64],
    ranks: &[usize],
    radius: f64,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let n = positions.len();
    let dim = positions.first().map_or(0, Vec::len);
    let a3 = radius.powi(3);
    let mut forces = vec![vec![0.0; dim]; n];
    for j in 0..n {
        for i in 0..n {
            if i == j {
                continue;
            }
            let attract = rng.gen::<f64>() < ATTRACTION_RATE;
            let tie = rng.gen::<f64>() < TIE_ATTRACTION_RATE;
            let p = ranks[i] < ranks[j] || (ranks[i] == ranks[j] && tie);
            if !p {
                continue;
            }
            let r = positions[i]
                .iter()
                .zip(&positions[j])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let magnitude = if r < radius { charges[i] * r / a3 } else { charges[i] / (r * r) };
            let s = if attract { magnitude } else { -magnitude };
            for v in 0..dim {
                forces[j][v] += s * (positions[i][v] - positions[j][v]);
            }
        }
    }
    forces
}

/// New position from force and previous velocity, both normalized.
/// Returns the unrepaired normalized position.
pub fn move_particle(z_old: &[f64], force: &[f64], v_old: &[f64], k_a: f64, k_v: f64, r1: f64, r2: f64) -> Vec<f64> {
    z_old
        .iter()
        .zip(force)
        .zip(v_old)
        .map(|((z, f), v)| r1 * k_a * f + r2 * k_v * v + z)
        .collect()
}

fn normalized(b: &Bounds, x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(v, &xv)| b.normalize(v, xv)).collect()
}

fn velocity_normalized(b: &Bounds, vel: &[f64]) -> Vec<f64> {
    vel.iter()
        .enumerate()
        .map(|(v, &d)| if b.span(v) > 0.0 { d / b.span(v) } else { 0.0 })
        .collect()
}

fn record<P: Problem>(iter: usize, memory: &ChargedMemory, problem: &P) -> IterationRecord {
    let feasible: Vec<&[f64]> = memory
        .members()
        .iter()
        .filter(|c| c.fitness.is_feasible())
        .map(|c| c.fitness.objectives.as_slice())
        .collect();
    let min_of = |k: usize| feasible.iter().map(|f| f[k]).min_by(f64::total_cmp);
    let hypervolume = problem.reference_point().and_then(|rp| {
        let inside: Vec<[f64; 2]> = feasible
            .iter()
            .filter(|f| f.len() == 2 && f[0] < rp[0] && f[1] < rp[1])
            .map(|f| [f[0], f[1]])
            .collect();
        if inside.is_empty() {
            Some(0.0)
        } else {
            hypervolume2d(&inside, [rp[0], rp[1]]).ok()
        }
    });
    IterationRecord {
        iter,
        archive_size: memory.len(),
        fit1_min: min_of(0),
        fit2_min: min_of(1),
        hypervolume,
    }
}

fn front_candidates(pop: &[ChargedParticle]) -> impl Iterator<Item = Candidate> + '_ {
    pop.iter().filter(|p| p.rank == 1).map(|p| Candidate {
        position: p.position.clone(),
        fitness: p.fitness.clone(),
    })
}

pub fn run<P: Problem>(config: &RunConfig, problem: &P) -> Result<RunResult, MocssError> {
    run_observed(config, problem, |_, _| {})
}

/// Runs the search, calling `observe` after initialization and after every
/// iteration with the log line and the current memory.
pub fn run_observed<P, F>(config: &RunConfig, problem: &P, mut observe: F) -> Result<RunResult, MocssError>
where
    P: Problem,
    F: FnMut(&IterationRecord, &ChargedMemory),
{
    config.validate()?;
    let bounds = problem.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pop = initialize(config, problem, &mut rng);
    let mut memory = ChargedMemory::new(config.archive_capacity);
    memory.update(front_candidates(&pop), config.alpha);
    let mut log = Vec::with_capacity(config.max_iters + 1);
    let rec = record(0, &memory, problem);
    observe(&rec, &memory);
    log.push(rec);
    let rates = RepairRates {
        cmcr: config.cmcr,
        par: config.par,
    };

    for it in 0..config.max_iters {
        let charges = {
            let objs: Vec<&[f64]> = pop.iter().map(|p| p.fitness.objectives.as_slice()).collect();
            compute_charges(&objs)
        };
        for (p, q) in pop.iter_mut().zip(&charges) {
            p.charge = *q;
        }
        let z: Vec<Vec<f64>> = pop.iter().map(|p| normalized(bounds, &p.position)).collect();
        let ranks: Vec<usize> = pop.iter().map(|p| p.rank).collect();
        let forces = compute_forces(&z, &charges, &ranks, config.radius, &mut rng);
        let (k_a, k_v) = config.coefficients(it);

        let mut moved: Vec<Vec<f64>> = Vec::with_capacity(pop.len());
        for (j, p) in pop.iter().enumerate() {
            let r1 = rng.gen::<f64>();
            let r2 = rng.gen::<f64>();
            let vz = velocity_normalized(bounds, &p.velocity);
            let zn = move_particle(&z[j], &forces[j], &vz, k_a, k_v, r1, r2);
            moved.push(
                zn.iter()
                    .enumerate()
                    .map(|(v, &t)| bounds.lower[v] + t * bounds.span(v))
                    .collect(),
            );
        }
        // velocity is the unrepaired displacement; repair only fixes positions
        let velocities: Vec<Vec<f64>> = moved
            .iter()
            .zip(&pop)
            .map(|(x, p)| x.iter().zip(&p.position).map(|(n, o)| n - o).collect())
            .collect();
        {
            let leaders: Vec<&[f64]> = pop.iter().filter(|p| p.rank == 1).map(|p| p.position.as_slice()).collect();
            for x in moved.iter_mut() {
                repair_boundary(x, memory.members(), &leaders, bounds, rates, &mut rng);
            }
        }

        let fits = evaluate_all(problem, &moved, config.parallel);
        for (((p, x), f), v) in pop.iter_mut().zip(moved).zip(fits).zip(velocities) {
            p.velocity = v;
            p.position = x;
            p.fitness = f;
        }
        assign_ranks(&mut pop);
        memory.update(front_candidates(&pop), config.alpha);

        let rec = record(it + 1, &memory, problem);
        observe(&rec, &memory);
        log.push(rec);
    }
    Ok(RunResult {
        memory,
        population: pop,
        log,
    })
}
