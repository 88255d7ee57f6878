//! Run configuration: a JSON document with the sections `problem`,
//! `geometry`, `strength`, `loads`, `mocss` and `output`. Every section and
//! key is optional; unknown and duplicate keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmarks::{Benchmark, BenchmarkKind};
use crate::bounds::Bounds;
use crate::geometry::{design_bounds, CanyonProfile, ConstraintLimits, ControlLevels, LEVELS, MORROW_POINT_HEIGHT};
use crate::mocss::RunConfig;
use crate::objectives::{DamProblem, DamSetup, Penalty};
use crate::stress_model::{GridSpec, LoadCase, SurrogateParams, SurrogateStressModel};
use crate::willam_warnke::{StrengthParams, WillamWarnke};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    /// Dotted key path of the offending entry; `.` for the whole document.
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: &str, message: impl ToString) -> Self {
        Self {
            path: path.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    #[default]
    Dam,
    Sch,
    Zdt1,
    Zdt2,
}

impl ProblemKind {
    pub fn benchmark(self) -> Option<BenchmarkKind> {
        match self {
            Self::Dam => None,
            Self::Sch => Some(BenchmarkKind::Sch),
            Self::Zdt1 => Some(BenchmarkKind::Zdt1),
            Self::Zdt2 => Some(BenchmarkKind::Zdt2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemSection {
    pub kind: ProblemKind,
    pub penalty: Penalty,
    pub quadrature_order: usize,
    pub grid: GridSpec,
    pub surrogate: SurrogateParams,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            kind: ProblemKind::Dam,
            penalty: Penalty::default(),
            quadrature_order: 32,
            grid: GridSpec::default(),
            surrogate: SurrogateParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    pub height: f64,
    pub crest_half_width: f64,
    pub base_half_width: f64,
    /// Depths of the control levels below the crest; uniform when absent.
    pub level_depths: Option<Vec<f64>>,
    pub limits: ConstraintLimits,
    /// Design-variable box; must lie inside the default box.
    pub bounds: Option<Bounds>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        let canyon = CanyonProfile::morrow_point();
        Self {
            height: MORROW_POINT_HEIGHT,
            crest_half_width: canyon.crest_half_width(),
            base_half_width: canyon.base_half_width(),
            level_depths: None,
            limits: ConstraintLimits::default(),
            bounds: None,
        }
    }
}

/// Only `fc` and `ft` are required by the surface; the rest default from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StrengthSection {
    pub fc: f64,
    pub ft: f64,
    pub fcb: Option<f64>,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub ambient_hydrostatic: Option<f64>,
    pub safety_factor: Option<f64>,
}

impl Default for StrengthSection {
    fn default() -> Self {
        let p = StrengthParams::morrow_point();
        Self {
            fc: p.fc,
            ft: p.ft,
            fcb: None,
            f1: None,
            f2: None,
            ambient_hydrostatic: None,
            safety_factor: None,
        }
    }
}

impl StrengthSection {
    pub fn params(&self) -> Result<StrengthParams, ConfigError> {
        let mut p = StrengthParams::new(self.fc, self.ft).map_err(|e| ConfigError::at("strength", e))?;
        p.fcb = self.fcb.unwrap_or(p.fcb);
        p.f1 = self.f1.unwrap_or(p.f1);
        p.f2 = self.f2.unwrap_or(p.f2);
        p.ambient_hydrostatic = self.ambient_hydrostatic.unwrap_or(p.ambient_hydrostatic);
        p.safety_factor = self.safety_factor.unwrap_or(p.safety_factor);
        p.validate().map_err(|e| ConfigError::at("strength", e))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoadsSection {
    pub cases: Vec<LoadCase>,
}

impl Default for LoadsSection {
    fn default() -> Self {
        Self {
            cases: LoadCase::standard_set(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: "results".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub problem: ProblemSection,
    pub geometry: GeometrySection,
    pub strength: StrengthSection,
    pub loads: LoadsSection,
    pub mocss: RunConfig,
    pub output: OutputSection,
}

impl Config {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::at(&path, e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.mocss.validate().map_err(|e| match e {
            crate::mocss::MocssError::InvalidConfig { field, reason } => {
                ConfigError::at(&format!("mocss.{field}"), reason)
            }
        })?;
        if self.problem.kind == ProblemKind::Dam {
            self.dam_setup()?;
        }
        Ok(())
    }

    pub fn levels(&self) -> Result<ControlLevels, ConfigError> {
        let g = &self.geometry;
        let levels = match &g.level_depths {
            None => ControlLevels::uniform(g.height, LEVELS - 1),
            Some(d) => ControlLevels::from_depths(g.height, d.clone()),
        };
        levels.map_err(|e| ConfigError::at("geometry.level_depths", e))
    }

    pub fn canyon(&self) -> Result<CanyonProfile, ConfigError> {
        let g = &self.geometry;
        CanyonProfile::new(g.height, g.crest_half_width, g.base_half_width).map_err(|e| ConfigError::at("geometry", e))
    }

    pub fn bounds(&self) -> Result<Bounds, ConfigError> {
        let full = design_bounds();
        let Some(b) = &self.geometry.bounds else { return Ok(full) };
        if b.lower.len() != full.dim() || b.upper.len() != full.dim() {
            return Err(ConfigError::at(
                "geometry.bounds",
                format!("expected {} lower and upper values", full.dim()),
            ));
        }
        for i in 0..full.dim() {
            let name = &crate::geometry::DesignVector::names()[i];
            if !(b.lower[i] >= full.lower[i]) {
                return Err(ConfigError::at(
                    &format!("geometry.bounds.lower[{i}]"),
                    format!("{name} lower bound {} is below the floor {}", b.lower[i], full.lower[i]),
                ));
            }
            if !(b.upper[i] <= full.upper[i]) {
                return Err(ConfigError::at(
                    &format!("geometry.bounds.upper[{i}]"),
                    format!("{name} upper bound {} exceeds the ceiling {}", b.upper[i], full.upper[i]),
                ));
            }
            if b.lower[i] > b.upper[i] {
                return Err(ConfigError::at(
                    &format!("geometry.bounds.lower[{i}]"),
                    format!("{name} lower bound exceeds its upper bound"),
                ));
            }
        }
        Ok(b.clone())
    }

    pub fn dam_setup(&self) -> Result<DamSetup, ConfigError> {
        let criterion = WillamWarnke::fit(self.strength.params()?).map_err(|e| ConfigError::at("strength", e))?;
        for (i, c) in self.loads.cases.iter().enumerate() {
            c.validate().map_err(|e| ConfigError::at(&format!("loads.cases[{i}]"), e))?;
        }
        self.problem
            .grid
            .validate()
            .map_err(|e| ConfigError::at("problem.grid", e))?;
        if self.problem.quadrature_order < 2 {
            return Err(ConfigError::at("problem.quadrature_order", "must be at least 2"));
        }
        let share = self.problem.surrogate.cantilever_share;
        if !(share.is_finite() && share >= 0.0) {
            return Err(ConfigError::at(
                "problem.surrogate.cantilever_share",
                "must be finite and non-negative",
            ));
        }
        let l = &self.geometry.limits;
        if !(l.gamma_allow > 0.0 && l.phi_lower_deg < l.phi_upper_deg && l.depth_samples >= 2) {
            return Err(ConfigError::at(
                "geometry.limits",
                "need gamma_allow > 0, phi_lower_deg < phi_upper_deg and at least 2 depth samples",
            ));
        }
        Ok(DamSetup {
            levels: self.levels()?,
            canyon: self.canyon()?,
            criterion,
            cases: self.loads.cases.clone(),
            grid: self.problem.grid,
            limits: self.geometry.limits,
            quadrature_order: self.problem.quadrature_order,
            penalty: self.problem.penalty,
            bounds: self.bounds()?,
        })
    }

    pub fn dam_problem(&self) -> Result<DamProblem, ConfigError> {
        DamProblem::new(self.dam_setup()?, SurrogateStressModel::new(self.problem.surrogate))
            .map_err(|e| ConfigError::at("problem", e))
    }

    pub fn benchmark(&self) -> Option<Benchmark> {
        self.problem.kind.benchmark().map(Benchmark::new)
    }
}
