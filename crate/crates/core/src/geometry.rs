//! Parabolic double-curvature arch dam shape.
//!
//! Frame: `z` is depth measured downward from the crest (`z = 0` at the crest,
//! `z = h` at the base), `x` runs across the valley and `y` is positive
//! downstream. The crown cantilever's upstream face follows a quadratic
//! profile; crown thickness and both face radii are Lagrange-interpolated
//! between control levels; each horizontal section is bounded by two parabolas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Bounds;
use crate::quadrature::GaussLegendre;

/// Number of control levels carrying thickness and radius variables.
pub const LEVELS: usize = 6;
/// Length of the flattened design vector: `gamma, beta, tc[6], ru[6], rd[6]`.
pub const DESIGN_LEN: usize = 2 + 3 * LEVELS;

/// Dam height of the Morrow Point site, in metres.
pub const MORROW_POINT_HEIGHT: f64 = 142.65;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("control levels {0} and {1} coincide")]
    CoincidentLevels(usize, usize),
    #[error("invalid control levels: {0}")]
    InvalidLevels(String),
    #[error("profile ratio beta must be non-zero")]
    ZeroBeta,
    #[error("dam height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("degenerate geometry: {what} = {value} at depth {depth} m")]
    Degenerate {
        what: &'static str,
        depth: f64,
        value: f64,
    },
    #[error("design vector needs {DESIGN_LEN} entries, got {0}")]
    DesignLength(usize),
    #[error("quadrature order must be at least 2, got {0}")]
    QuadratureOrder(usize),
    #[error("invalid canyon profile: {0}")]
    InvalidCanyon(String),
}

/// The twenty shape variables, in the order
/// `gamma, beta, tc1..tc6, ru1..ru6, rd1..rd6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignVector {
    /// Overhang slope ratio of the crown's upstream face at the crest.
    pub gamma: f64,
    /// Fraction of the height at which the upstream face is vertical.
    pub beta: f64,
    /// Crown thickness at each control level (m).
    pub tc: [f64; LEVELS],
    /// Upstream face radius at each control level (m).
    pub ru: [f64; LEVELS],
    /// Downstream face radius at each control level (m).
    pub rd: [f64; LEVELS],
}

impl DesignVector {
    pub fn from_slice(x: &[f64]) -> Result<Self, GeometryError> {
        if x.len() != DESIGN_LEN {
            return Err(GeometryError::DesignLength(x.len()));
        }
        let mut tc = [0.0; LEVELS];
        let mut ru = [0.0; LEVELS];
        let mut rd = [0.0; LEVELS];
        tc.copy_from_slice(&x[2..2 + LEVELS]);
        ru.copy_from_slice(&x[2 + LEVELS..2 + 2 * LEVELS]);
        rd.copy_from_slice(&x[2 + 2 * LEVELS..]);
        Ok(Self {
            gamma: x[0],
            beta: x[1],
            tc,
            ru,
            rd,
        })
    }

    pub fn to_array(&self) -> [f64; DESIGN_LEN] {
        let mut out = [0.0; DESIGN_LEN];
        out[0] = self.gamma;
        out[1] = self.beta;
        out[2..2 + LEVELS].copy_from_slice(&self.tc);
        out[2 + LEVELS..2 + 2 * LEVELS].copy_from_slice(&self.ru);
        out[2 + 2 * LEVELS..].copy_from_slice(&self.rd);
        out
    }

    /// Column names in flattened order.
    pub fn names() -> [String; DESIGN_LEN] {
        std::array::from_fn(|i| match i {
            0 => "gamma".to_string(),
            1 => "beta".to_string(),
            i if i < 2 + LEVELS => format!("tc{}", i - 1),
            i if i < 2 + 2 * LEVELS => format!("ru{}", i - 1 - LEVELS),
            i => format!("rd{}", i - 1 - 2 * LEVELS),
        })
    }

    /// Minimum-volume acceptable Morrow Point design reported for the
    /// charged-system-search optimizer.
    pub fn morrow_point_reference() -> Self {
        Self {
            gamma: 0.201,
            beta: 0.516,
            tc: [4.852, 8.974, 11.972, 16.298, 15.883, 16.891],
            ru: [110.637, 93.582, 80.408, 67.690, 55.084, 41.713],
            rd: [109.716, 92.719, 79.562, 66.341, 54.418, 39.995],
        }
    }
}

/// Classic design-practice bounds for the Morrow Point site.
pub fn design_bounds() -> Bounds {
    let tc = [(3.0, 10.0), (5.0, 14.0), (7.0, 19.0), (9.0, 23.0), (11.0, 26.0), (12.0, 31.0)];
    let r = [(104.0, 135.0), (91.0, 118.0), (78.0, 101.0), (65.0, 85.0), (52.0, 68.0), (39.0, 51.0)];
    let mut lower = vec![0.0, 0.5];
    let mut upper = vec![0.3, 1.0];
    for block in [&tc, &r, &r] {
        lower.extend(block.iter().map(|b| b.0));
        upper.extend(block.iter().map(|b| b.1));
    }
    Bounds::new(lower, upper)
}

/// Depths of the control levels, crest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlLevels {
    height: f64,
    depths: Vec<f64>,
}

impl ControlLevels {
    /// `segments + 1` equally spaced levels from the crest to the base.
    pub fn uniform(height: f64, segments: usize) -> Result<Self, GeometryError> {
        if segments == 0 {
            return Err(GeometryError::InvalidLevels("at least one segment required".into()));
        }
        let depths = (0..=segments)
            .map(|i| height * i as f64 / segments as f64)
            .collect();
        Self::from_depths(height, depths)
    }

    pub fn from_depths(height: f64, depths: Vec<f64>) -> Result<Self, GeometryError> {
        if !(height > 0.0) {
            return Err(GeometryError::NonPositiveHeight(height));
        }
        if depths.len() < 2 {
            return Err(GeometryError::InvalidLevels("need at least two levels".into()));
        }
        if depths[0] != 0.0 || depths[depths.len() - 1] != height {
            return Err(GeometryError::InvalidLevels(format!(
                "levels must span [0, {height}], got [{}, {}]",
                depths[0],
                depths[depths.len() - 1]
            )));
        }
        for i in 1..depths.len() {
            if depths[i] == depths[i - 1] {
                return Err(GeometryError::CoincidentLevels(i - 1, i));
            }
            if depths[i] < depths[i - 1] {
                return Err(GeometryError::InvalidLevels("depths must increase".into()));
            }
        }
        Ok(Self { height, depths })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    /// Lagrange cardinal polynomial of level `i` (zero-based) at depth `z`.
    pub fn basis(&self, z: f64, i: usize) -> f64 {
        let zi = self.depths[i];
        self.depths
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != i)
            .map(|(_, &zm)| (z - zm) / (zi - zm))
            .product()
    }

    /// Derivative of [`Self::basis`] with respect to depth.
    pub fn basis_slope(&self, z: f64, i: usize) -> f64 {
        let zi = self.depths[i];
        let mut total = 0.0;
        for (k, &zk) in self.depths.iter().enumerate() {
            if k == i {
                continue;
            }
            let mut term = 1.0 / (zi - zk);
            for (m, &zm) in self.depths.iter().enumerate() {
                if m != i && m != k {
                    term *= (z - zm) / (zi - zm);
                }
            }
            total += term;
        }
        total
    }

    pub fn interpolate(&self, z: f64, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.basis(z, i))
            .sum()
    }

    pub fn interpolate_slope(&self, z: f64, values: &[f64]) -> f64 {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.basis_slope(z, i))
            .sum()
    }
}

/// Checked Lagrange basis over an arbitrary list of node depths.
/// `i` is zero-based.
pub fn lagrange_basis(z: f64, i: usize, depths: &[f64]) -> Result<f64, GeometryError> {
    if i >= depths.len() {
        return Err(GeometryError::InvalidLevels(format!(
            "level index {i} out of range for {} levels",
            depths.len()
        )));
    }
    for a in 0..depths.len() {
        for b in a + 1..depths.len() {
            if depths[a] == depths[b] {
                return Err(GeometryError::CoincidentLevels(a, b));
            }
        }
    }
    let zi = depths[i];
    let mut w = 1.0;
    for (m, &zm) in depths.iter().enumerate() {
        if m != i {
            w *= (z - zm) / (zi - zm);
        }
    }
    Ok(w)
}

/// Upstream-face offset of the crown cantilever at depth `z`.
pub fn crown_profile(z: f64, gamma: f64, beta: f64, height: f64) -> Result<f64, GeometryError> {
    if beta == 0.0 {
        return Err(GeometryError::ZeroBeta);
    }
    Ok(gamma * z * z / (2.0 * beta * height) - gamma * z)
}

/// `d g / d z`; vanishes at `z = beta * h`.
pub fn crown_profile_slope(z: f64, gamma: f64, beta: f64, height: f64) -> Result<f64, GeometryError> {
    if beta == 0.0 {
        return Err(GeometryError::ZeroBeta);
    }
    Ok(gamma * z / (beta * height) - gamma)
}

/// Symmetric trapezoidal valley: the half-width varies linearly from the
/// crest to the base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanyonProfile {
    height: f64,
    crest_half_width: f64,
    base_half_width: f64,
}

impl CanyonProfile {
    pub fn new(height: f64, crest_half_width: f64, base_half_width: f64) -> Result<Self, GeometryError> {
        if !(height > 0.0) {
            return Err(GeometryError::NonPositiveHeight(height));
        }
        if !(base_half_width > 0.0) {
            return Err(GeometryError::InvalidCanyon(format!(
                "base half-width must be positive, got {base_half_width}"
            )));
        }
        if crest_half_width < base_half_width {
            return Err(GeometryError::InvalidCanyon(format!(
                "half-width must not grow with depth (crest {crest_half_width} < base {base_half_width})"
            )));
        }
        Ok(Self {
            height,
            crest_half_width,
            base_half_width,
        })
    }

    /// Default valley for the Morrow Point site: 125 m crest half-width,
    /// base half-width 0.35 of that.
    pub fn morrow_point() -> Self {
        Self::new(MORROW_POINT_HEIGHT, 125.0, 0.35 * 125.0).expect("valid default canyon")
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn crest_half_width(&self) -> f64 {
        self.crest_half_width
    }

    pub fn base_half_width(&self) -> f64 {
        self.base_half_width
    }

    /// Half-width at depth `z`, clamped to the dam's height range.
    pub fn half_width(&self, z: f64) -> f64 {
        let t = (z / self.height).clamp(0.0, 1.0);
        self.crest_half_width + (self.base_half_width - self.crest_half_width) * t
    }
}

/// Limits for the geometric and stability constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstraintLimits {
    /// Allowed absolute overhang slope of both faces.
    pub gamma_allow: f64,
    pub phi_lower_deg: f64,
    pub phi_upper_deg: f64,
    /// Uniformly spaced depths (crest and base included) at which the central
    /// angle is checked.
    pub depth_samples: usize,
}

impl Default for ConstraintLimits {
    fn default() -> Self {
        Self {
            gamma_allow: 0.3,
            phi_lower_deg: 90.0,
            phi_upper_deg: 130.0,
            depth_samples: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `rd_i / ru_i - 1` at control level `index`.
    FaceCrossing,
    /// Largest upstream-face overhang slope over the control intervals.
    OverhangUpstream,
    /// Largest downstream-face overhang slope over the control intervals.
    OverhangDownstream,
    /// Central-angle window violation at sampled depth `index`.
    CentralAngle,
}

/// One signed constraint; `value <= 0` is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub index: usize,
    pub value: f64,
}

impl Constraint {
    pub fn violation(&self) -> f64 {
        self.value.max(0.0)
    }
}

/// `n` uniformly spaced depths over `[0, h]`, both ends included.
pub fn sample_depths(height: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| height * k as f64 / (n - 1) as f64).collect(),
    }
}

/// An evaluable dam body.
#[derive(Debug, Clone, PartialEq)]
pub struct DamGeometry {
    design: DesignVector,
    levels: ControlLevels,
    canyon: CanyonProfile,
}

impl DamGeometry {
    pub fn new(design: DesignVector, levels: ControlLevels, canyon: CanyonProfile) -> Result<Self, GeometryError> {
        if levels.len() != LEVELS {
            return Err(GeometryError::InvalidLevels(format!(
                "design carries {LEVELS} levels, control levels define {}",
                levels.len()
            )));
        }
        if design.beta == 0.0 {
            return Err(GeometryError::ZeroBeta);
        }
        Ok(Self {
            design,
            levels,
            canyon,
        })
    }

    pub fn design(&self) -> &DesignVector {
        &self.design
    }

    pub fn levels(&self) -> &ControlLevels {
        &self.levels
    }

    pub fn canyon(&self) -> &CanyonProfile {
        &self.canyon
    }

    pub fn height(&self) -> f64 {
        self.levels.height()
    }

    pub fn crown_offset(&self, z: f64) -> f64 {
        let d = &self.design;
        d.gamma * z * z / (2.0 * d.beta * self.height()) - d.gamma * z
    }

    pub fn crown_offset_slope(&self, z: f64) -> f64 {
        let d = &self.design;
        d.gamma * z / (d.beta * self.height()) - d.gamma
    }

    pub fn thickness(&self, z: f64) -> f64 {
        self.levels.interpolate(z, &self.design.tc)
    }

    pub fn thickness_slope(&self, z: f64) -> f64 {
        self.levels.interpolate_slope(z, &self.design.tc)
    }

    pub fn radius_upstream(&self, z: f64) -> f64 {
        self.levels.interpolate(z, &self.design.ru)
    }

    pub fn radius_downstream(&self, z: f64) -> f64 {
        self.levels.interpolate(z, &self.design.rd)
    }

    fn positive_radii(&self, z: f64) -> Result<(f64, f64), GeometryError> {
        let ru = self.radius_upstream(z);
        if !(ru > 0.0) {
            return Err(GeometryError::Degenerate {
                what: "upstream radius",
                depth: z,
                value: ru,
            });
        }
        let rd = self.radius_downstream(z);
        if !(rd > 0.0) {
            return Err(GeometryError::Degenerate {
                what: "downstream radius",
                depth: z,
                value: rd,
            });
        }
        Ok((ru, rd))
    }

    /// `(y_u, y_d)` of the two face parabolas at `(x, z)`.
    pub fn faces(&self, x: f64, z: f64) -> Result<(f64, f64), GeometryError> {
        let (ru, rd) = self.positive_radii(z)?;
        let g = self.crown_offset(z);
        let yu = x * x / (2.0 * ru) + g;
        let yd = x * x / (2.0 * rd) + g + self.thickness(z);
        Ok((yu, yd))
    }

    /// Concrete volume by a tensor-product Gauss–Legendre rule of `order`
    /// points per direction, with `x` clipped to the canyon at every depth.
    pub fn volume(&self, order: usize) -> Result<f64, GeometryError> {
        if order < 2 {
            return Err(GeometryError::QuadratureOrder(order));
        }
        let rule = GaussLegendre::new(order);
        let mut total = 0.0;
        for (z, wz) in rule.mapped(0.0, self.height()) {
            let (ru, rd) = self.positive_radii(z)?;
            let tc = self.thickness(z);
            let curvature_gap = 0.5 * (1.0 / rd - 1.0 / ru);
            let hw = self.canyon.half_width(z);
            let row: f64 = rule
                .mapped(-hw, hw)
                .map(|(x, wx)| wx * (tc + x * x * curvature_gap).abs())
                .sum();
            total += wz * row;
        }
        Ok(total)
    }

    /// Opening angle of the arch at depth `z`, `2 atan(halfWidth / r_u)`, in degrees.
    pub fn central_angle_deg(&self, z: f64) -> f64 {
        central_angle_deg(self.canyon.half_width(z), self.radius_upstream(z))
    }

    /// Pointwise `max(|dy_u/dz|, |dy_d/dz|)` on the crown (`x = 0`).
    pub fn overhang_slope_at(&self, z: f64) -> f64 {
        let up = self.crown_offset_slope(z);
        let down = up + self.thickness_slope(z);
        up.abs().max(down.abs())
    }

    /// Largest `|dy/dz|` of the crown faces measured as secants between
    /// consecutive control levels, `(upstream, downstream)`.
    pub fn overhang_slopes(&self) -> (f64, f64) {
        let z = self.levels.depths();
        let mut up = 0.0_f64;
        let mut down = 0.0_f64;
        for k in 1..z.len() {
            let dz = z[k] - z[k - 1];
            let du = self.crown_offset(z[k]) - self.crown_offset(z[k - 1]);
            let dt = self.design.tc[k] - self.design.tc[k - 1];
            up = up.max((du / dz).abs());
            down = down.max(((du + dt) / dz).abs());
        }
        (up, down)
    }

    /// Signed constraint values (`<= 0` feasible): face crossing per
    /// control level, overhang per face, central angle per sampled depth.
    pub fn constraints(&self, limits: &ConstraintLimits) -> Vec<Constraint> {
        let d = &self.design;
        let mut out = Vec::with_capacity(LEVELS + 2 + limits.depth_samples);
        for i in 0..LEVELS {
            out.push(Constraint {
                kind: ConstraintKind::FaceCrossing,
                index: i,
                value: d.rd[i] / d.ru[i] - 1.0,
            });
        }
        let (up, down) = self.overhang_slopes();
        out.push(Constraint {
            kind: ConstraintKind::OverhangUpstream,
            index: 0,
            value: up / limits.gamma_allow - 1.0,
        });
        out.push(Constraint {
            kind: ConstraintKind::OverhangDownstream,
            index: 0,
            value: down / limits.gamma_allow - 1.0,
        });
        for (k, z) in sample_depths(self.height(), limits.depth_samples).into_iter().enumerate() {
            let phi = self.central_angle_deg(z);
            let excess = (limits.phi_lower_deg - phi).max(phi - limits.phi_upper_deg);
            out.push(Constraint {
                kind: ConstraintKind::CentralAngle,
                index: k,
                value: excess / limits.phi_upper_deg,
            });
        }
        out
    }
}

pub fn central_angle_deg(half_width: f64, radius_upstream: f64) -> f64 {
    2.0 * (half_width / radius_upstream).atan().to_degrees()
}
