//! Flux limiters, smoothness ratios and κ-scheme flux increments.

use crate::error::{Error, Result};

const RATIO_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimiterSpec {
    /// Unlimited κ-scheme written in limiter form.
    KappaFixed(f64),
    Minmod,
    VanLeer,
    VanAlbada,
    Superbee,
    Koren,
}

impl LimiterSpec {
    pub const TVD_KINDS: [LimiterSpec; 5] =
        [LimiterSpec::Minmod, LimiterSpec::VanLeer, LimiterSpec::VanAlbada, LimiterSpec::Superbee, LimiterSpec::Koren];

    pub fn kappa_fixed(kappa: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidInput(format!("kappa {kappa} outside [-1, 1]")));
        }
        Ok(LimiterSpec::KappaFixed(kappa))
    }

    /// Parses `minmod`, `vanleer`, `vanalbada`, `superbee`, `koren` or
    /// `kappa_fixed` (the latter takes κ separately).
    pub fn parse(name: &str, kappa: f64) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "kappa_fixed" | "kappa" => Self::kappa_fixed(kappa),
            "minmod" => Ok(LimiterSpec::Minmod),
            "vanleer" => Ok(LimiterSpec::VanLeer),
            "vanalbada" => Ok(LimiterSpec::VanAlbada),
            "superbee" => Ok(LimiterSpec::Superbee),
            "koren" => Ok(LimiterSpec::Koren),
            other => Err(Error::Config(format!("unknown limiter `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LimiterSpec::KappaFixed(_) => "kappa_fixed",
            LimiterSpec::Minmod => "minmod",
            LimiterSpec::VanLeer => "vanleer",
            LimiterSpec::VanAlbada => "vanalbada",
            LimiterSpec::Superbee => "superbee",
            LimiterSpec::Koren => "koren",
        }
    }

    /// Half the higher-order flux increment at a face, `½ φ(r) Δ_up` with
    /// `r = Δ_down / Δ_up`. The κ-scheme is evaluated without forming `r`.
    #[inline]
    pub fn increment(&self, d_up: f64, d_down: f64) -> f64 {
        match *self {
            LimiterSpec::KappaFixed(k) => 0.25 * ((1.0 + k) * d_down + (1.0 - k) * d_up),
            _ => 0.5 * limiter_phi(*self, regularized_ratio(d_down, d_up)) * d_up,
        }
    }
}

#[inline]
pub fn regularized_ratio(num: f64, den: f64) -> f64 {
    if den.abs() >= RATIO_EPS {
        return num / den;
    }
    let s = if den >= 0.0 { 1.0 } else { -1.0 };
    num / (den + s * RATIO_EPS)
}

/// Ratios at faces `i+1/2` and `i-1/2`, each downwind jump over upwind jump.
pub fn ratio_r(u_mm: f64, u_m: f64, u_0: f64, u_p: f64) -> (f64, f64) {
    (regularized_ratio(u_p - u_0, u_0 - u_m), regularized_ratio(u_0 - u_m, u_m - u_mm))
}

pub fn limiter_phi(spec: LimiterSpec, r: f64) -> f64 {
    match spec {
        LimiterSpec::KappaFixed(k) => 0.5 * ((1.0 + k) * r + (1.0 - k)),
        _ if r <= 0.0 || r.is_nan() => 0.0,
        LimiterSpec::Minmod => r.min(1.0),
        LimiterSpec::VanLeer => {
            if r.is_infinite() {
                2.0
            } else {
                2.0 * r / (1.0 + r)
            }
        }
        LimiterSpec::VanAlbada => {
            if r.is_infinite() {
                1.0
            } else {
                (r * r + r) / (r * r + 1.0)
            }
        }
        LimiterSpec::Superbee => (2.0 * r).min(1.0).max(r.min(2.0)),
        LimiterSpec::Koren => (2.0 * r).min((1.0 + 2.0 * r) / 3.0).min(2.0),
    }
}

/// Convective difference at point `i` split into the first-order part and the
/// higher-order increments of its two faces:
/// `(u_0 - u_m) + alpha + gamma` equals the limited flux difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaFlux {
    pub first_order: f64,
    /// Increment of face `i+1/2`.
    pub alpha: f64,
    /// Minus the increment of face `i-1/2`.
    pub gamma: f64,
}

impl KappaFlux {
    pub fn total(&self) -> f64 {
        self.first_order + self.alpha + self.gamma
    }
}

pub fn kappa_flux_1d(u_mm: f64, u_m: f64, u_0: f64, u_p: f64, spec: LimiterSpec) -> KappaFlux {
    KappaFlux {
        first_order: u_0 - u_m,
        alpha: spec.increment(u_0 - u_m, u_p - u_0),
        gamma: -spec.increment(u_m - u_mm, u_0 - u_m),
    }
}

pub fn harten_tvd_check(c: &[f64], d: &[f64]) -> Result<bool> {
    if c.len() != d.len() {
        return Err(Error::InvalidInput("coefficient sequences differ in length".into()));
    }
    Ok(c.iter().zip(d).all(|(&c, &d)| c >= 0.0 && d >= 0.0 && c + d <= 1.0))
}

pub fn total_variation(u: &[f64]) -> f64 {
    u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// One forward-Euler step of `u_t + a u_x = 0` (a > 0) with the limited flux
/// and Courant number `cfl`. The first two cells and the last are held fixed.
pub fn advect_step(u: &[f64], cfl: f64, spec: LimiterSpec) -> Vec<f64> {
    let n = u.len();
    let mut out = u.to_vec();
    for i in 2..n - 1 {
        let f = kappa_flux_1d(u[i - 2], u[i - 1], u[i], u[i + 1], spec);
        out[i] = u[i] - cfl * f.total();
    }
    out
}

/// Harten coefficients `(c_i, d_i)` of one [`advect_step`], written as
/// `u_i^{n+1} = u_i - c_i (u_i - u_{i-1}) + d_i (u_{i+1} - u_i)`.
pub fn advect_harten_coefficients(u: &[f64], cfl: f64, spec: LimiterSpec) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let (mut c, mut d) = (vec![], vec![]);
    for i in 2..n - 1 {
        let r_out = regularized_ratio(u[i + 1] - u[i], u[i] - u[i - 1]);
        let r_in = regularized_ratio(u[i] - u[i - 1], u[i - 1] - u[i - 2]);
        let back = if r_in != 0.0 && r_in.is_finite() { limiter_phi(spec, r_in) / r_in } else { 0.0 };
        c.push(cfl * (1.0 + 0.5 * limiter_phi(spec, r_out) - 0.5 * back));
        d.push(0.0);
    }
    (c, d)
}
