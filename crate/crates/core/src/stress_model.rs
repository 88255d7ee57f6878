//! Static stress surrogate for the dam body.
//!
//! This is not a structural analysis. Each sample point receives three
//! principal components built from closed-form approximations:
//!
//! * arch hoop stress from thin-ring theory, `-p(z) r_u(z) / t_c(z)`, where the
//!   pressure is hydrostatic plus, for the pseudo-seismic case, the
//!   Westergaard pseudo-static term `7/8 k_h rho_w g sqrt(H_w z_w)`;
//! * vertical cantilever stress from self-weight, `-rho_c g z`, plus a bending
//!   term from the triangular hydrostatic load on a unit-width cantilever,
//!   `M / W` with `M = rho_w g z_w^3 / 6` and `W = t_c^2 / 6`, scaled by the
//!   share of the water load the cantilevers carry (tension upstream,
//!   compression downstream);
//! * zero normal stress on the free face.
//!
//! Anything implementing [`StressEvaluator`] can replace it, e.g. a client for
//! a finite-element backend.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{sample_depths, DamGeometry};
use crate::willam_warnke::PrincipalStress;

pub const GRAVITY: f64 = 9.81;
pub const WESTERGAARD_COEFFICIENT: f64 = 7.0 / 8.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StressError {
    #[error("non-positive crown thickness {value} m at depth {depth} m")]
    NonPositiveThickness { depth: f64, value: f64 },
    #[error("non-positive upstream radius {value} m at depth {depth} m")]
    NonPositiveRadius { depth: f64, value: f64 },
    #[error("sample grid needs at least {min} {what}, got {got}")]
    GridTooCoarse { what: &'static str, min: usize, got: usize },
    #[error("arc station count must be odd so the crown is sampled, got {0}")]
    EvenArcStations(usize),
    #[error("invalid load case: {0}")]
    InvalidLoadCase(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadKind {
    /// Self-weight only.
    Gravity,
    /// Self-weight and hydrostatic water pressure.
    Hydrostatic,
    /// Hydrostatic case plus Westergaard pseudo-static pressure.
    PseudoSeismic,
}

impl LoadKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LoadKind::Gravity => "gravity",
            LoadKind::Hydrostatic => "hydrostatic",
            LoadKind::PseudoSeismic => "pseudo_seismic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadCase {
    pub kind: LoadKind,
    /// Depth of the water surface below the crest (m); `0` is a full reservoir.
    #[serde(default)]
    pub water_level: f64,
    /// Horizontal acceleration ratio `k_h`, used by the pseudo-seismic case.
    #[serde(default = "default_seismic_coefficient")]
    pub seismic_coefficient: f64,
    #[serde(default = "default_water_density")]
    pub water_density: f64,
    #[serde(default = "default_concrete_density")]
    pub concrete_density: f64,
    /// Include the self-weight term.
    #[serde(default = "default_true")]
    pub self_weight: bool,
}

fn default_seismic_coefficient() -> f64 {
    0.1
}
fn default_water_density() -> f64 {
    1000.0
}
fn default_concrete_density() -> f64 {
    2483.0
}
fn default_true() -> bool {
    true
}

impl LoadCase {
    pub fn new(kind: LoadKind) -> Self {
        Self {
            kind,
            water_level: 0.0,
            seismic_coefficient: default_seismic_coefficient(),
            water_density: default_water_density(),
            concrete_density: default_concrete_density(),
            self_weight: true,
        }
    }

    /// Gravity, full-reservoir hydrostatic and pseudo-seismic cases.
    pub fn standard_set() -> Vec<Self> {
        vec![
            Self::new(LoadKind::Gravity),
            Self::new(LoadKind::Hydrostatic),
            Self::new(LoadKind::PseudoSeismic),
        ]
    }

    pub fn validate(&self) -> Result<(), StressError> {
        if !(self.water_density > 0.0) || !(self.concrete_density > 0.0) {
            return Err(StressError::InvalidLoadCase("densities must be positive".into()));
        }
        if !(self.seismic_coefficient >= 0.0) {
            return Err(StressError::InvalidLoadCase("seismic coefficient must be non-negative".into()));
        }
        if !(self.water_level >= 0.0) {
            return Err(StressError::InvalidLoadCase("water level must be non-negative".into()));
        }
        Ok(())
    }

    fn has_water(&self) -> bool {
        self.kind != LoadKind::Gravity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Upstream,
    Downstream,
}

impl Face {
    pub fn as_str(&self) -> &'static str {
        match self {
            Face::Upstream => "upstream",
            Face::Downstream => "downstream",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub x: f64,
    pub z: f64,
    pub face: Face,
}

/// Grid resolution: depths from crest to base, arc stations from abutment to abutment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub depths: usize,
    pub arc_stations: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            depths: 11,
            arc_stations: 9,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), StressError> {
        if self.depths < 6 {
            return Err(StressError::GridTooCoarse {
                what: "depths",
                min: 6,
                got: self.depths,
            });
        }
        if self.arc_stations < 9 {
            return Err(StressError::GridTooCoarse {
                what: "arc stations",
                min: 9,
                got: self.arc_stations,
            });
        }
        if self.arc_stations.is_multiple_of(2) {
            return Err(StressError::EvenArcStations(self.arc_stations));
        }
        Ok(())
    }
}

/// Depth-major grid; at each depth the stations run from `-halfWidth` to
/// `+halfWidth`, each station sampled on the upstream then the downstream face.
pub fn sample_grid(geometry: &DamGeometry, spec: &GridSpec) -> Result<Vec<SamplePoint>, StressError> {
    spec.validate()?;
    let canyon = geometry.canyon();
    let half = (spec.arc_stations / 2) as f64;
    let mut points = Vec::with_capacity(spec.depths * spec.arc_stations * 2);
    for z in sample_depths(geometry.height(), spec.depths) {
        let hw = canyon.half_width(z);
        for k in 0..spec.arc_stations {
            // Symmetric by construction: station k mirrors station n-1-k exactly.
            let t = (k as f64 - half) / half;
            let x = hw * t;
            for face in [Face::Upstream, Face::Downstream] {
                points.push(SamplePoint { x, z, face });
            }
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurrogateParams {
    /// Fraction of the hydrostatic overturning moment resisted by cantilever
    /// bending; the arches are assumed to carry the rest.
    pub cantilever_share: f64,
}

impl Default for SurrogateParams {
    fn default() -> Self {
        Self {
            cantilever_share: 0.04,
        }
    }
}

/// Thin-ring hoop stress; negative (compressive) for positive pressure.
pub fn hoop_stress(pressure: f64, radius: f64, thickness: f64) -> f64 {
    -pressure * radius / thickness
}

/// Principal stress states for every `(point, load case)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StressField {
    pub points: Vec<SamplePoint>,
    pub cases: Vec<LoadCase>,
    states: Vec<PrincipalStress>,
}

impl StressField {
    pub fn state(&self, point: usize, case: usize) -> &PrincipalStress {
        &self.states[point * self.cases.len() + case]
    }

    /// `(point index, case index, state)` in grid order, cases innermost.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &PrincipalStress)> {
        let nc = self.cases.len();
        self.states
            .iter()
            .enumerate()
            .map(move |(k, s)| (k / nc, k % nc, s))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Extension point: geometry and load cases in, stress field out.
pub trait StressEvaluator: Sync {
    fn evaluate(
        &self,
        geometry: &DamGeometry,
        cases: &[LoadCase],
        points: &[SamplePoint],
    ) -> Result<StressField, StressError>;
}

/// The closed-form surrogate described in the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SurrogateStressModel {
    pub params: SurrogateParams,
}

impl SurrogateStressModel {
    pub fn new(params: SurrogateParams) -> Self {
        Self { params }
    }

    /// Principal stresses (MPa) at one point for one load case.
    pub fn point_state(
        &self,
        geometry: &DamGeometry,
        case: &LoadCase,
        point: &SamplePoint,
    ) -> Result<PrincipalStress, StressError> {
        let z = point.z;
        let tc = geometry.thickness(z);
        if !(tc > 0.0) {
            return Err(StressError::NonPositiveThickness { depth: z, value: tc });
        }
        let ru = geometry.radius_upstream(z);
        if !(ru > 0.0) {
            return Err(StressError::NonPositiveRadius { depth: z, value: ru });
        }
        let (depth_below_water, reservoir_depth) = if case.has_water() {
            (
                (z - case.water_level).max(0.0),
                (geometry.height() - case.water_level).max(0.0),
            )
        } else {
            (0.0, 0.0)
        };
        let unit_water = case.water_density * GRAVITY;
        let mut pressure = unit_water * depth_below_water;
        if case.kind == LoadKind::PseudoSeismic {
            pressure += WESTERGAARD_COEFFICIENT
                * case.seismic_coefficient
                * unit_water
                * (reservoir_depth * depth_below_water).sqrt();
        }
        let hoop = hoop_stress(pressure, ru, tc);

        let weight = if case.self_weight {
            -case.concrete_density * GRAVITY * z
        } else {
            0.0
        };
        let bending = self.params.cantilever_share * unit_water * depth_below_water.powi(3) / (tc * tc);
        let vertical = match point.face {
            Face::Upstream => weight + bending,
            Face::Downstream => weight - bending,
        };
        const PA_TO_MPA: f64 = 1e-6;
        Ok(PrincipalStress::new(hoop * PA_TO_MPA, vertical * PA_TO_MPA, 0.0))
    }
}

impl StressEvaluator for SurrogateStressModel {
    fn evaluate(
        &self,
        geometry: &DamGeometry,
        cases: &[LoadCase],
        points: &[SamplePoint],
    ) -> Result<StressField, StressError> {
        for c in cases {
            c.validate()?;
        }
        let mut states = Vec::with_capacity(points.len() * cases.len());
        for p in points {
            for c in cases {
                states.push(self.point_state(geometry, c, p)?);
            }
        }
        Ok(StressField {
            points: points.to_vec(),
            cases: cases.to_vec(),
            states,
        })
    }
}
