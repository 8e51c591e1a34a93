//! Physical parameters, canonical and complex mode coordinates, and the
//! classical observables of a charged particle in a uniform magnetic field
//! (symmetric gauge).
//!
//! The charge, field strength and speed of light only ever enter through the
//! cyclotron frequency, so `omega` is the primitive parameter.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Action scale, mass and cyclotron frequency, plus the derived magnetic
/// length `gamma = sqrt(2 hbar / (m omega))` and Planck constant `h = 2 pi hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    hbar: f64,
    mass: f64,
    omega: f64,
    gamma: f64,
    planck_h: f64,
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        for (name, value) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self {
            hbar,
            mass,
            omega,
            gamma: (2.0 * hbar / (mass * omega)).sqrt(),
            planck_h: 2.0 * PI * hbar,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Magnetic length.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn planck_h(&self) -> f64 {
        self.planck_h
    }

    /// Natural Gaussian width of the momentum axes, `hbar / gamma`.
    pub fn momentum_scale(&self) -> f64 {
        self.hbar / self.gamma
    }

    /// `m gamma omega`, which equals `2 hbar / gamma`.
    pub fn m_gamma_omega(&self) -> f64 {
        self.mass * self.gamma * self.omega
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self::new(1.0, 1.0, 1.0).expect("unit parameters are valid")
    }
}

/// Optional overrides read from a `key = value` configuration file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub cutoff: Option<usize>,
    pub quad_order: Option<usize>,
    pub format: Option<String>,
    pub unit_norm: Option<bool>,
}

impl ParamOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Later layers win: `self` is applied over `base`.
    pub fn apply(&self, base: PhysParams) -> Result<PhysParams> {
        PhysParams::new(
            self.hbar.unwrap_or(base.hbar),
            self.mass.unwrap_or(base.mass),
            self.omega.unwrap_or(base.omega),
        )
    }
}

/// A point of the four-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q1: 0.0, q2: 0.0, p1: 0.0, p2: 0.0 };

    pub fn new(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        Self { q1, q2, p1, p2 }
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// `Z = (q1 + i q2) / gamma`.
    pub fn z(&self, params: &PhysParams) -> C64 {
        C64::new(self.q1, self.q2) / params.gamma()
    }

    /// `rho^2 = Z Zbar`.
    pub fn rho_sq(&self, params: &PhysParams) -> f64 {
        self.z(params).norm_sqr()
    }

    /// `(tau_plus, tau_minus)` with `tau = q1/gamma +- gamma p2/hbar`.
    pub fn tau(&self, params: &PhysParams) -> (f64, f64) {
        let x = self.q1 / params.gamma();
        let y = self.p2 / params.momentum_scale();
        (x + y, x - y)
    }

    /// `zeta^2 = gamma^2 (p1^2 + p2^2) / (4 hbar^2)`. No closed-form marginal
    /// here consumes it; it is exposed for completeness.
    pub fn zeta_sq(&self, params: &PhysParams) -> f64 {
        let s = params.momentum_scale();
        (self.p1 * self.p1 + self.p2 * self.p2) / (4.0 * s * s)
    }
}

/// Dimensionless annihilation functions `a` and `b`; their conjugates are the
/// creation functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoords {
    pub a: C64,
    pub b: C64,
}

impl ModeCoords {
    pub fn a_bar(&self) -> C64 {
        self.a.conj()
    }

    pub fn b_bar(&self) -> C64 {
        self.b.conj()
    }
}

pub fn to_mode_coords(pt: &PhasePoint, params: &PhysParams) -> ModeCoords {
    let mgw = params.m_gamma_omega();
    let g = params.gamma();
    let i = C64::i();
    let a = C64::new(pt.p1, pt.p2) / mgw - i * C64::new(pt.q1, pt.q2) / (2.0 * g);
    let b = -C64::new(pt.p1, -pt.p2) / mgw + i * C64::new(pt.q1, -pt.q2) / (2.0 * g);
    ModeCoords { a, b }
}

/// Inverse of [`to_mode_coords`].
pub fn from_mode_coords(mc: &ModeCoords, params: &PhysParams) -> PhasePoint {
    let g = params.gamma();
    let mgw = params.m_gamma_omega();
    let diff = mc.a - mc.b;
    let sum = mc.a + mc.b;
    PhasePoint {
        q1: -g * diff.im,
        p1: 0.5 * mgw * diff.re,
        q2: g * sum.re,
        p2: 0.5 * mgw * sum.im,
    }
}

/// Kinetic velocities `(v1, v2)` in the symmetric gauge.
pub fn velocities(pt: &PhasePoint, params: &PhysParams) -> (f64, f64) {
    let m = params.mass();
    let half_mw = 0.5 * m * params.omega();
    ((pt.p1 + half_mw * pt.q2) / m, (pt.p2 - half_mw * pt.q1) / m)
}

pub fn classical_h(pt: &PhasePoint, params: &PhysParams) -> f64 {
    let (v1, v2) = velocities(pt, params);
    0.5 * params.mass() * (v1 * v1 + v2 * v2)
}

/// Canonical angular momentum `q1 p2 - q2 p1`.
pub fn classical_j(pt: &PhasePoint, _params: &PhysParams) -> f64 {
    pt.q1 * pt.p2 - pt.q2 * pt.p1
}
