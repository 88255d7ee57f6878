//! Willam–Warnke five-parameter failure surface for concrete.
//!
//! Stresses are in MPa, tension positive. The criterion value is
//! `F / f_c - S / s_f`: negative is safe, zero lies on the failure surface,
//! positive means failure.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::solve3;

const SQRT_15: f64 = 3.872_983_346_207_417;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WwError {
    #[error("invalid strength parameters: {0}")]
    InvalidStrength(String),
    #[error("calibration system for the {0} meridian is singular")]
    DegenerateStrength(&'static str),
    #[error("tensile meridian has no positive root (a = {0:?})")]
    NoApex([f64; 3]),
    #[error("failure surface is non-positive ({value}) in the {domain} domain")]
    NonPositiveSurface { domain: Domain, value: f64 },
}

/// Strength constants of the concrete.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthParams {
    /// Uniaxial compressive strength (MPa, positive).
    pub fc: f64,
    /// Uniaxial tensile strength (MPa, positive).
    pub ft: f64,
    /// Biaxial compressive strength (MPa).
    pub fcb: f64,
    /// Biaxial compression superimposed on the ambient hydrostatic state (MPa).
    pub f1: f64,
    /// Uniaxial compression superimposed on the ambient hydrostatic state (MPa).
    pub f2: f64,
    /// Ambient hydrostatic stress magnitude (MPa).
    pub ambient_hydrostatic: f64,
    pub safety_factor: f64,
}

impl StrengthParams {
    /// Two-constant surface: `f_cb = 1.2 f_c`, `f_1 = 1.45 f_c`,
    /// `f_2 = 1.725 f_c`, ambient hydrostatic stress `sqrt(3) f_c`, `s_f = 1`.
    pub fn new(fc: f64, ft: f64) -> Result<Self, WwError> {
        let p = Self {
            fc,
            ft,
            fcb: 1.2 * fc,
            f1: 1.45 * fc,
            f2: 1.725 * fc,
            ambient_hydrostatic: 3f64.sqrt() * fc,
            safety_factor: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Morrow Point mass concrete: `f_c = 30`, `f_t = 1.5` MPa.
    pub fn morrow_point() -> Self {
        Self::new(30.0, 1.5).expect("valid default strengths")
    }

    pub fn validate(&self) -> Result<(), WwError> {
        let bad = |m: String| Err(WwError::InvalidStrength(m));
        if !(self.fc > 0.0) {
            return bad(format!("f_c must be positive, got {}", self.fc));
        }
        if !(self.ft > 0.0) {
            return bad(format!("f_t must be positive, got {}", self.ft));
        }
        if self.ft >= self.fc {
            return bad(format!("f_t ({}) must be below f_c ({})", self.ft, self.fc));
        }
        for (name, v) in [("f_cb", self.fcb), ("f_1", self.f1), ("f_2", self.f2)] {
            if !(v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !self.ambient_hydrostatic.is_finite() {
            return bad("ambient hydrostatic stress must be finite".into());
        }
        if !(self.safety_factor > 0.0) {
            return bad(format!("safety factor must be positive, got {}", self.safety_factor));
        }
        Ok(())
    }

    /// Every stress-valued constant multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            fc: self.fc * lambda,
            ft: self.ft * lambda,
            fcb: self.fcb * lambda,
            f1: self.f1 * lambda,
            f2: self.f2 * lambda,
            ambient_hydrostatic: self.ambient_hydrostatic * lambda,
            safety_factor: self.safety_factor,
        }
    }
}

/// Principal stresses sorted so that `s1 >= s2 >= s3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalStress {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl PrincipalStress {
    /// Sorts three principal values in any order.
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        let mut v = [a, b, c];
        v.sort_by(|x, y| y.total_cmp(x));
        Self {
            s1: v[0],
            s2: v[1],
            s3: v[2],
        }
    }

    pub fn hydrostatic(&self) -> f64 {
        (self.s1 + self.s2 + self.s3) / 3.0
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self::new(self.s1 * lambda, self.s2 * lambda, self.s3 * lambda)
    }

    fn deviatoric_norm(&self) -> f64 {
        let (a, b, c) = (self.s1, self.s2, self.s3);
        ((a - b).powi(2) + (b - c).powi(2) + (c - a).powi(2)).sqrt()
    }

    /// Cosine of the similarity angle; the hydrostatic axis is assigned `1`.
    pub fn cos_eta(&self) -> f64 {
        let denom = std::f64::consts::SQRT_2 * self.deviatoric_norm();
        if denom == 0.0 {
            return 1.0;
        }
        ((2.0 * self.s1 - self.s2 - self.s3) / denom).clamp(-1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// compression-compression-compression
    Ccc,
    /// tension-compression-compression
    Tcc,
    /// tension-tension-compression
    Ttc,
    /// tension-tension-tension
    Ttt,
}

impl Domain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Domain::Ccc => "CCC",
            Domain::Tcc => "TCC",
            Domain::Ttc => "TTC",
            Domain::Ttt => "TTT",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Zero components go to the more tensile domain.
pub fn classify_domain(s: &PrincipalStress) -> Domain {
    if s.s3 >= 0.0 {
        Domain::Ttt
    } else if s.s2 >= 0.0 {
        Domain::Ttc
    } else if s.s1 >= 0.0 {
        Domain::Tcc
    } else {
        Domain::Ccc
    }
}

/// `|sigma_h| <= sqrt(3) f_c`, boundary inclusive.
pub fn hydrostatic_validity(s: &PrincipalStress, strength: &StrengthParams) -> bool {
    s.hydrostatic().abs() <= 3f64.sqrt() * strength.fc
}

/// Meridian polynomials `r1 = a0 + a1 xi + a2 xi^2` (tensile, eta = 0)
/// and `r2 = b0 + b1 xi + b2 xi^2` (compressive, eta = 60 deg).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: [f64; 3],
    pub b: [f64; 3],
    /// Hydrostatic-tension apex where both meridians vanish.
    pub xi0: f64,
}

impl Coefficients {
    pub fn r1(&self, xi: f64) -> f64 {
        self.a[0] + self.a[1] * xi + self.a[2] * xi * xi
    }

    pub fn r2(&self, xi: f64) -> f64 {
        self.b[0] + self.b[1] * xi + self.b[2] * xi * xi
    }
}

/// Non-fatal findings from the coefficient fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CoefficientWarning {
    /// One of `a0 > 0, a1 <= 0, a2 <= 0, b0 > 0, b1 <= 0, b2 <= 0` fails.
    Sign { name: String, value: f64 },
    /// `r1 / r2` leaves `(0.5, 1.25)`, so the surface may lose convexity.
    Convexity { xi: f64, ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFit {
    pub coefficients: Coefficients,
    pub warnings: Vec<CoefficientWarning>,
}

/// Calibration stress states, `(tensile meridian, compressive meridian)`.
pub fn calibration_states(p: &StrengthParams) -> [PrincipalStress; 5] {
    let ha = p.ambient_hydrostatic;
    [
        PrincipalStress::new(p.ft, 0.0, 0.0),
        PrincipalStress::new(0.0, -p.fcb, -p.fcb),
        PrincipalStress::new(-ha, -ha - p.f1, -ha - p.f1),
        PrincipalStress::new(0.0, 0.0, -p.fc),
        PrincipalStress::new(-ha, -ha, -ha - p.f2),
    ]
}

fn f_over_fc(s: &PrincipalStress, fc: f64) -> f64 {
    s.deviatoric_norm() / SQRT_15 / fc
}

/// Fits both meridians through the five calibration points. The tensile
/// meridian is solved first; its positive root fixes the apex shared by the
/// compressive meridian.
pub fn solve_coefficients(p: &StrengthParams) -> Result<CoefficientFit, WwError> {
    p.validate()?;
    let fc = p.fc;
    let ha = p.ambient_hydrostatic / fc;
    let xi_t = p.ft / (3.0 * fc);
    let xi_cb = -2.0 * p.fcb / (3.0 * fc);
    let xi_1 = -ha - 2.0 * p.f1 / (3.0 * fc);
    let xi_2 = -ha - p.f2 / (3.0 * fc);
    let [s_t, s_cb, s_1, s_c, s_2] = calibration_states(p);

    let row = |xi: f64| [1.0, xi, xi * xi];

    let a = solve3(
        [row(xi_t), row(xi_cb), row(xi_1)],
        [f_over_fc(&s_t, fc), f_over_fc(&s_cb, fc), f_over_fc(&s_1, fc)],
    )
    .ok_or(WwError::DegenerateStrength("tensile"))?;

    let xi0 = smallest_positive_root(a).ok_or(WwError::NoApex(a))?;

    let b = solve3(
        [row(-1.0 / 3.0), row(xi_2), row(xi0)],
        [f_over_fc(&s_c, fc), f_over_fc(&s_2, fc), 0.0],
    )
    .ok_or(WwError::DegenerateStrength("compressive"))?;

    let coefficients = Coefficients { a, b, xi0 };
    let mut warnings = Vec::new();
    let signs = [
        ("a0", a[0], a[0] > 0.0),
        ("a1", a[1], a[1] <= 0.0),
        ("a2", a[2], a[2] <= 0.0),
        ("b0", b[0], b[0] > 0.0),
        ("b1", b[1], b[1] <= 0.0),
        ("b2", b[2], b[2] <= 0.0),
    ];
    for (name, value, ok) in signs {
        if !ok {
            warnings.push(CoefficientWarning::Sign {
                name: name.to_string(),
                value,
            });
        }
    }
    // Convexity over the working range of mean stress.
    for k in 0..100 {
        let xi = -1.0 + (xi_t + 1.0) * k as f64 / 99.0;
        let ratio = coefficients.r1(xi) / coefficients.r2(xi);
        if !(ratio > 0.5 && ratio < 1.25) {
            warnings.push(CoefficientWarning::Convexity { xi, ratio });
            break;
        }
    }
    Ok(CoefficientFit {
        coefficients,
        warnings,
    })
}

fn smallest_positive_root(c: [f64; 3]) -> Option<f64> {
    let [c0, c1, c2] = c;
    let roots: Vec<f64> = if c2.abs() <= 1e-14 * (c0.abs() + c1.abs()) {
        if c1 == 0.0 {
            return None;
        }
        vec![-c0 / c1]
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            return None;
        }
        // Numerically stable pair.
        let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
        let mut r = vec![q / c2];
        if q != 0.0 {
            r.push(c0 / q);
        }
        r
    };
    roots
        .into_iter()
        .filter(|r| *r > 0.0 && r.is_finite())
        .min_by(f64::total_cmp)
}

/// Interpolates between the tensile (`r1`) and compressive (`r2`)
/// meridians at similarity angle `cos_eta`.
pub fn meridian_blend(r1: f64, r2: f64, cos_eta: f64) -> f64 {
    let d = r2 * r2 - r1 * r1;
    let c2 = cos_eta * cos_eta;
    let root = (4.0 * d * c2 + 5.0 * r1 * r1 - 4.0 * r1 * r2).max(0.0).sqrt();
    let num = 2.0 * r2 * d * cos_eta + r2 * (2.0 * r1 - r2) * root;
    let den = 4.0 * d * c2 + (r2 - 2.0 * r1).powi(2);
    num / den
}

/// Breakdown of one criterion evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assessment {
    pub domain: Domain,
    pub f_over_fc: f64,
    /// Failure surface value before division by the safety factor.
    pub surface: f64,
    pub margin: f64,
}

/// A fitted failure surface, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WillamWarnke {
    strength: StrengthParams,
    coefficients: Coefficients,
    warnings: Vec<CoefficientWarning>,
}

impl WillamWarnke {
    pub fn fit(strength: StrengthParams) -> Result<Self, WwError> {
        let fit = solve_coefficients(&strength)?;
        Ok(Self {
            strength,
            coefficients: fit.coefficients,
            warnings: fit.warnings,
        })
    }

    pub fn strength(&self) -> &StrengthParams {
        &self.strength
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    /// Sign or convexity problems found while fitting; evaluation still proceeds.
    pub fn warnings(&self) -> &[CoefficientWarning] {
        &self.warnings
    }

    pub fn is_valid_state(&self, s: &PrincipalStress) -> bool {
        hydrostatic_validity(s, &self.strength)
    }

    pub fn margin(&self, s: &PrincipalStress) -> Result<f64, WwError> {
        self.assess(s).map(|a| a.margin)
    }

    pub fn assess(&self, s: &PrincipalStress) -> Result<Assessment, WwError> {
        let p = &self.strength;
        let c = &self.coefficients;
        let domain = classify_domain(s);
        let (f_over_fc, surface) = match domain {
            Domain::Ccc => {
                let xi = s.hydrostatic() / p.fc;
                let surface = meridian_blend(c.r1(xi), c.r2(xi), s.cos_eta());
                if !(surface > 0.0) {
                    return Err(WwError::NonPositiveSurface { domain, value: surface });
                }
                (f_over_fc(s, p.fc), surface)
            }
            Domain::Tcc => {
                let chi = (s.s2 + s.s3) / 3.0 / p.fc;
                let base = meridian_blend(c.r1(chi), c.r2(chi), s.cos_eta());
                if !(base > 0.0) {
                    return Err(WwError::NonPositiveSurface { domain, value: base });
                }
                let f = ((s.s2 - s.s3).powi(2) + s.s2 * s.s2 + s.s3 * s.s3).sqrt() / SQRT_15;
                (f / p.fc, (1.0 - s.s1 / p.ft) * base)
            }
            Domain::Ttc => (s.s1 / p.fc, p.ft / p.fc * (1.0 + s.s3 / p.fc)),
            Domain::Ttt => (s.s1 / p.fc, p.ft / p.fc),
        };
        Ok(Assessment {
            domain,
            f_over_fc,
            surface,
            margin: f_over_fc - surface / p.safety_factor,
        })
    }
}
