//! Lubricant closures and resolution of the Moes operating point into the
//! dimensionless constants used by the solver.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsParams {
    pub alpha: f64,
    pub z: f64,
    pub p0: f64,
    pub ph: f64,
    pub lambda: f64,
    pub moes_m: f64,
    pub moes_l: f64,
    pub eta0: f64,
    pub e_prime: f64,
    pub r: f64,
    pub us: f64,
    pub a: f64,
}

/// Physical gauge used to turn (M, L, α) into units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeDefaults {
    pub e_prime: f64,
    pub r: f64,
    pub eta0: f64,
    pub z: f64,
    pub p0: f64,
}

impl Default for GaugeDefaults {
    fn default() -> Self {
        Self { e_prime: 2.26e11, r: 0.0127, eta0: 0.04, z: 0.68, p0: 1.98e8 }
    }
}

pub fn resolve_moes(m: f64, l: f64, alpha: f64, defaults: GaugeDefaults) -> Result<PhysicsParams> {
    let GaugeDefaults { e_prime, r, eta0, z, p0 } = defaults;
    for (name, v) in [("M", m), ("L", l), ("alpha", alpha), ("E'", e_prime), ("R", r), ("eta0", eta0), ("z", z), ("p0", p0)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
        }
    }
    let g = alpha * e_prime;
    let two_u = (l / g).powi(4);
    let w = m * two_u.powf(0.75);
    let f = w * e_prime * r * r;
    let a = (3.0 * f * r / (2.0 * e_prime)).cbrt();
    let ph = 3.0 * f / (2.0 * PI * a * a);
    let us = two_u * e_prime * r / eta0;
    let lambda = 6.0 * eta0 * us * r * r / (a.powi(3) * ph);
    Ok(PhysicsParams { alpha, z, p0, ph, lambda, moes_m: m, moes_l: l, eta0, e_prime, r, us, a })
}

impl PhysicsParams {
    /// Recompute (M, L) from the physical fields.
    pub fn moes_numbers(&self) -> (f64, f64) {
        let two_u = self.eta0 * self.us / (self.e_prime * self.r);
        let f = 2.0 * PI * self.a * self.a * self.ph / 3.0;
        let w = f / (self.e_prime * self.r * self.r);
        (w * two_u.powf(-0.75), self.alpha * self.e_prime * two_u.powf(0.25))
    }

    /// αp_H, the dimensionless pressure–viscosity parameter.
    pub fn alpha_bar(&self) -> f64 {
        self.alpha * self.ph
    }

    pub fn viscosity(&self, u: f64) -> f64 {
        viscosity(u, self.alpha, self.z, self.p0, self.ph)
    }

    pub fn density(&self, u: f64) -> f64 {
        density(u, self.ph)
    }

    pub fn epsilon(&self, u: f64, h: f64) -> f64 {
        self.density(u) * h * h * h / (self.viscosity(u) * self.lambda)
    }
}

pub fn viscosity(u: f64, alpha: f64, z: f64, p0: f64, ph: f64) -> f64 {
    let base = 1.0 + u * ph / p0;
    ((alpha * p0 / z) * (-1.0 + base.powf(z))).exp()
}

pub fn density(u: f64, ph: f64) -> f64 {
    let p = u * ph;
    (0.59e9 + 1.34 * p) / (0.59e9 + p)
}

pub fn epsilon_coef(u: f64, h: f64, params: &PhysicsParams) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::NonPhysical { level: 0, iteration: 0, detail: format!("film thickness {h} is not positive") });
    }
    Ok(params.epsilon(u, h))
}

#[inline]
pub fn face_mean(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}
