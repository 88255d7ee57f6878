//! Two-objective constrained evaluation of a dam design: concrete volume
//! and the worst Willam–Warnke margin over the stress field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Bounds;
use crate::geometry::{
    design_bounds, CanyonProfile, Constraint, ConstraintLimits, ControlLevels, DamGeometry, DesignVector,
    GeometryError, DESIGN_LEN,
};
use crate::problem::{Fitness, Problem};
use crate::stress_model::{
    sample_grid, GridSpec, LoadCase, SamplePoint, StressError, StressEvaluator, SurrogateStressModel,
};
use crate::willam_warnke::{WillamWarnke, WwError};

/// Extra violation charged to designs whose geometry cannot be evaluated.
pub const DEGENERATE_VIOLATION: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectiveError {
    #[error("design variable {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Stress(#[from] StressError),
    #[error(transparent)]
    Criterion(#[from] WwError),
}

/// Objective values assigned to designs that cannot be analysed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Penalty {
    pub fit1: f64,
    pub fit2: f64,
}

impl Default for Penalty {
    fn default() -> Self {
        Self { fit1: 3.4e5, fit2: 1.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub constraints: Vec<Constraint>,
    /// Stress states outside the hydrostatic validity window of the default strengths.
    pub validity_warnings: usize,
    /// Why the design fell back to penalty values, if it did.
    pub degenerate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Concrete volume (m^3).
    pub fit1: f64,
    /// Worst Willam–Warnke margin over all sample points and load cases.
    pub fit2: f64,
    pub violation: f64,
    pub feasible: bool,
    pub diagnostics: Diagnostics,
}

impl Evaluation {
    pub fn fitness(&self) -> Fitness {
        Fitness {
            objectives: vec![self.fit1, self.fit2],
            violation: self.violation,
        }
    }
}

/// Everything needed to evaluate a design, fixed for a run.
pub struct DamProblem<E: StressEvaluator = SurrogateStressModel> {
    levels: ControlLevels,
    canyon: CanyonProfile,
    criterion: WillamWarnke,
    cases: Vec<LoadCase>,
    grid: Vec<SamplePoint>,
    evaluator: E,
    limits: ConstraintLimits,
    quadrature_order: usize,
    penalty: Penalty,
    bounds: Bounds,
}

/// Construction parameters for [`DamProblem`].
#[derive(Debug, Clone)]
pub struct DamSetup {
    pub levels: ControlLevels,
    pub canyon: CanyonProfile,
    pub criterion: WillamWarnke,
    pub cases: Vec<LoadCase>,
    pub grid: GridSpec,
    pub limits: ConstraintLimits,
    pub quadrature_order: usize,
    pub penalty: Penalty,
    pub bounds: Bounds,
}

impl DamSetup {
    pub fn morrow_point() -> Self {
        Self {
            levels: ControlLevels::uniform(crate::geometry::MORROW_POINT_HEIGHT, 5).expect("valid levels"),
            canyon: CanyonProfile::morrow_point(),
            criterion: WillamWarnke::fit(crate::willam_warnke::StrengthParams::morrow_point())
                .expect("default strengths fit"),
            cases: LoadCase::standard_set(),
            grid: GridSpec::default(),
            limits: ConstraintLimits::default(),
            quadrature_order: 32,
            penalty: Penalty::default(),
            bounds: design_bounds(),
        }
    }
}

impl DamProblem<SurrogateStressModel> {
    pub fn morrow_point() -> Self {
        Self::new(DamSetup::morrow_point(), SurrogateStressModel::default()).expect("valid default problem")
    }
}

impl<E: StressEvaluator> DamProblem<E> {
    pub fn new(setup: DamSetup, evaluator: E) -> Result<Self, ObjectiveError> {
        if setup.quadrature_order < 2 {
            return Err(GeometryError::QuadratureOrder(setup.quadrature_order).into());
        }
        if setup.bounds.dim() != DESIGN_LEN {
            return Err(GeometryError::DesignLength(setup.bounds.dim()).into());
        }
        for c in &setup.cases {
            c.validate()?;
        }
        // The grid depends on the canyon and height only, so any in-bounds design will do.
        let probe = DamGeometry::new(
            DesignVector::morrow_point_reference(),
            setup.levels.clone(),
            setup.canyon,
        )?;
        let grid = sample_grid(&probe, &setup.grid)?;
        Ok(Self {
            levels: setup.levels,
            canyon: setup.canyon,
            criterion: setup.criterion,
            cases: setup.cases,
            grid,
            evaluator,
            limits: setup.limits,
            quadrature_order: setup.quadrature_order,
            penalty: setup.penalty,
            bounds: setup.bounds,
        })
    }

    pub fn criterion(&self) -> &WillamWarnke {
        &self.criterion
    }

    pub fn cases(&self) -> &[LoadCase] {
        &self.cases
    }

    pub fn grid(&self) -> &[SamplePoint] {
        &self.grid
    }

    pub fn penalty(&self) -> &Penalty {
        &self.penalty
    }

    pub fn evaluator(&self) -> &E {
        &self.evaluator
    }

    pub fn geometry(&self, design: DesignVector) -> Result<DamGeometry, GeometryError> {
        DamGeometry::new(design, self.levels.clone(), self.canyon)
    }

    fn check_bounds(&self, design: &DesignVector) -> Result<(), ObjectiveError> {
        for (index, value) in design.to_array().into_iter().enumerate() {
            if !self.bounds.in_bounds(index, value) {
                return Err(ObjectiveError::OutOfBounds {
                    index,
                    value,
                    lower: self.bounds.lower[index],
                    upper: self.bounds.upper[index],
                });
            }
        }
        Ok(())
    }

    /// Evaluates an in-bounds design. Geometry, stress or criterion failures
    /// never abort: the design receives the penalty values and is infeasible.
    pub fn evaluate(&self, design: &DesignVector) -> Result<Evaluation, ObjectiveError> {
        self.check_bounds(design)?;
        Ok(self.evaluate_unchecked(design))
    }

    fn evaluate_unchecked(&self, design: &DesignVector) -> Evaluation {
        let geometry = match self.geometry(*design) {
            Ok(g) => g,
            Err(e) => return self.penalized(Vec::new(), e.to_string()),
        };
        let constraints = geometry.constraints(&self.limits);
        let fit1 = match geometry.volume(self.quadrature_order) {
            Ok(v) => v,
            Err(e) => return self.penalized(constraints, e.to_string()),
        };
        let field = match self.evaluator.evaluate(&geometry, &self.cases, &self.grid) {
            Ok(f) => f,
            Err(e) => return self.penalized(constraints, e.to_string()),
        };
        let mut fit2 = f64::NEG_INFINITY;
        let mut validity_warnings = 0;
        for (_, _, state) in field.iter() {
            if !self.criterion.is_valid_state(state) {
                validity_warnings += 1;
            }
            match self.criterion.margin(state) {
                Ok(m) => fit2 = fit2.max(m),
                Err(e) => return self.penalized(constraints, e.to_string()),
            }
        }
        let violation: f64 = constraints.iter().map(Constraint::violation).sum();
        Evaluation {
            fit1,
            fit2,
            violation,
            feasible: violation == 0.0,
            diagnostics: Diagnostics {
                constraints,
                validity_warnings,
                degenerate: None,
            },
        }
    }

    fn penalized(&self, constraints: Vec<Constraint>, reason: String) -> Evaluation {
        let violation = DEGENERATE_VIOLATION + constraints.iter().map(Constraint::violation).sum::<f64>();
        Evaluation {
            fit1: self.penalty.fit1,
            fit2: self.penalty.fit2,
            violation,
            feasible: false,
            diagnostics: Diagnostics {
                constraints,
                validity_warnings: 0,
                degenerate: Some(reason),
            },
        }
    }
}

impl<E: StressEvaluator> Problem for DamProblem<E> {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        let design = DesignVector::from_slice(x).expect("design vector length");
        DamProblem::evaluate(self, &design)
            .expect("optimizer proposed an out-of-bounds design")
            .fitness()
    }

    fn reference_point(&self) -> Option<Vec<f64>> {
        Some(vec![self.penalty.fit1, self.penalty.fit2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_design_is_feasible_and_safe() {
        let p = DamProblem::morrow_point();
        let e = p.evaluate(&DesignVector::morrow_point_reference()).unwrap();
        assert!(e.feasible, "{:?}", e.diagnostics);
        assert_eq!(e.violation, 0.0);
        assert!(e.fit2 < 0.0, "fit2 = {}", e.fit2);
        assert!(e.fit1 > 0.0);
        assert!(e.diagnostics.degenerate.is_none());
    }

    #[test]
    fn crossing_faces_are_infeasible() {
        let p = DamProblem::morrow_point();
        let mut d = DesignVector::morrow_point_reference();
        d.rd[2] = 100.0;
        d.ru[2] = 80.0;
        let e = p.evaluate(&d).unwrap();
        assert!(!e.feasible);
        assert!(e.violation > 0.0);
    }

    #[test]
    fn identical_designs_agree() {
        let p = DamProblem::morrow_point();
        let d = DesignVector::morrow_point_reference();
        assert_eq!(p.evaluate(&d).unwrap(), p.evaluate(&d).unwrap());
    }

    #[test]
    fn out_of_bounds_is_a_contract_error() {
        let p = DamProblem::morrow_point();
        let mut d = DesignVector::morrow_point_reference();
        d.gamma = 0.5;
        assert!(matches!(
            p.evaluate(&d),
            Err(ObjectiveError::OutOfBounds { index: 0, .. })
        ));
    }

    #[test]
    fn penalty_ceilings() {
        let pen = Penalty::default();
        assert_eq!(pen.fit1, 3.4e5);
        assert_eq!(pen.fit2, 1.3);
    }
}
