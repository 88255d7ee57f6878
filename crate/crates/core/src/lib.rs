//! Multi-objective shape optimization of parabolic double-curvature arch dams.
//!
//! The library turns a twenty-variable design vector into a dam body,
//! scores it on concrete volume and on the worst Willam–Warnke failure
//! margin over a stress field, searches the trade-off with a multi-objective
//! charged system search, and ranks the resulting Pareto set with a
//! multi-criteria tournament.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: crown profile, Lagrange interpolants, face parabolas, volume, constraints
//! * [`willam_warnke`]: failure-surface fit and criterion value
//! * [`stress_model`]: closed-form static stress surrogate behind [`stress_model::StressEvaluator`]
//! * [`objectives`]: the constrained two-objective dam problem
//! * [`mocss`]: the optimizer and its charged memory
//! * [`mtdm`]: tournament decision making over a Pareto set
//! * [`benchmarks`]: analytic test problems and front-quality metrics
//! * [`config`]: run configuration schema

// `!(x > 0.0)` is the idiom used throughout to reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod bounds;
pub mod config;
pub mod geometry;
pub mod linalg;
pub mod mocss;
pub mod mtdm;
pub mod objectives;
pub mod problem;
pub mod quadrature;
pub mod stress_model;
pub mod willam_warnke;

pub use benchmarks::{Benchmark, BenchmarkKind};
pub use bounds::Bounds;
pub use config::Config;
pub use geometry::{CanyonProfile, ControlLevels, DamGeometry, DesignVector};
pub use mocss::{ChargedMemory, RunConfig};
pub use mtdm::Scenario;
pub use objectives::{DamProblem, Evaluation};
pub use problem::{Fitness, Problem};
pub use willam_warnke::{PrincipalStress, StrengthParams, WillamWarnke};
