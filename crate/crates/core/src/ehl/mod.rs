//! Point-contact EHL problem written as a linear complementarity problem:
//! limited κ-fluxes, hybrid Gauss–Seidel / distributive Jacobi line
//! relaxation, projected FAS multigrid and force-balance closure.

mod film;
mod operator;
mod pfas;
mod relax;

pub use film::FilmOperator;
pub use operator::{ehl_residual, face_fluxes, lcp_residual_norm, refresh_coefficients, restricted_residual};
pub use pfas::{pfas_cycle, solve_ehl, update_h00, EhlSolution};
pub use relax::{line_jacobi_distributed, line_system, relax_sweep, select_splitting, LineKind, LineSettings};

use crate::error::{Error, Result};
use crate::grid::{make_hierarchy, Field, GridHierarchy, GridLevel};
use crate::limiter::LimiterSpec;
use crate::physics::PhysicsParams;

/// Load the force balance is driven to, `∫∫u = 2π/3`.
pub const LOAD: f64 = 2.0 * std::f64::consts::PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hybrid {
    /// Gauss–Seidel lines keep the downstream-face part of the flux implicit.
    Hs1,
    /// As `Hs1`, plus the upstream-face part.
    Hs2,
}

impl Hybrid {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hs1" => Ok(Self::Hs1),
            "hs2" => Ok(Self::Hs2),
            other => Err(Error::Config(format!("unknown hybrid splitting `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hs1 => "hs1",
            Self::Hs2 => "hs2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EhlConfig {
    pub physics: PhysicsParams,
    pub bounds: [f64; 4],
    pub coarsest_n: usize,
    pub levels: usize,
    pub spec: LimiterSpec,
    pub hybrid: Hybrid,
    pub switch_threshold: f64,
    pub omega_gs: f64,
    pub omega_jac: f64,
    pub c_h00: f64,
    pub nu1: usize,
    pub nu2: usize,
    pub gamma: usize,
    /// Cycles per level after the first.
    pub cycles: usize,
    /// Relaxation sweeps on the first (coarsest) level of the nested iteration.
    pub coarse_sweeps: usize,
    /// Projected relaxation sweeps used as the coarsest-grid solver inside a cycle.
    pub coarsest_sweeps: usize,
    pub coarsest_tol: f64,
    pub window_radius: usize,
    pub mlmi_order: usize,
    pub mlmi_m: usize,
    /// Evaluate the film by direct summation instead of MLMI.
    pub direct_film: bool,
    pub h00_init: f64,
    /// Stop cycling a level once the LCP residual drops below this.
    pub tol: f64,
}

impl EhlConfig {
    pub fn new(physics: PhysicsParams) -> Self {
        Self {
            physics,
            bounds: [-2.5, -2.5, 2.5, 2.5],
            coarsest_n: 33,
            levels: 4,
            spec: LimiterSpec::KappaFixed(1.0 / 3.0),
            hybrid: Hybrid::Hs1,
            switch_threshold: 0.6,
            omega_gs: 0.8,
            omega_jac: 0.4,
            c_h00: 0.05,
            nu1: 3,
            nu2: 3,
            gamma: 1,
            cycles: 30,
            coarse_sweeps: 400,
            coarsest_sweeps: 20,
            coarsest_tol: 1e-10,
            window_radius: 1,
            mlmi_order: 6,
            mlmi_m: 4,
            direct_film: false,
            h00_init: -0.5,
            tol: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.switch_threshold > 0.0) {
            return Err(Error::Config("switch_threshold must be positive".into()));
        }
        if !(0.005..=0.2).contains(&self.c_h00) {
            return Err(Error::Config(format!("c_h00 = {} outside [0.005, 0.2]", self.c_h00)));
        }
        if !(self.omega_gs > 0.0 && self.omega_gs <= 2.0 && self.omega_jac > 0.0 && self.omega_jac <= 2.0) {
            return Err(Error::Config("under-relaxation factors must lie in (0, 2]".into()));
        }
        if self.levels == 0 || self.window_radius == 0 {
            return Err(Error::Config("levels and window_radius must be at least 1".into()));
        }
        Ok(())
    }

    pub fn hierarchy(&self) -> Result<GridHierarchy> {
        make_hierarchy(self.bounds, self.coarsest_n, self.levels)
    }
}

/// Everything one multigrid level carries.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpLevelState {
    pub level: GridLevel,
    pub u: Field,
    pub h: Field,
    pub eps: Field,
    pub rho: Field,
    pub h00: f64,
    /// Right-hand side of the force balance; `2π/3` on the finest level.
    pub load_target: f64,
    pub rhs_f1: Field,
    /// Obstacle; zero on every level.
    pub lower_f2: Field,
    /// FAS right-hand side of the film equation (zero on the finest level).
    pub coarse_rhs_film: Field,
}

impl LcpLevelState {
    pub fn new(level: GridLevel, u: Field, h00: f64) -> Self {
        let z = Field::zeros(level);
        Self {
            level,
            u,
            h: z.clone(),
            eps: z.clone(),
            rho: z.clone(),
            h00,
            load_target: LOAD,
            rhs_f1: z.clone(),
            lower_f2: z.clone(),
            coarse_rhs_film: z,
        }
    }

    /// Dry-contact pressure `sqrt(1 − x² − y²)`, zero outside the unit circle.
    pub fn hertzian(level: GridLevel, h00: f64) -> Self {
        let mut u = Field::from_fn(level, |x, y| (1.0 - x * x - y * y).max(0.0).sqrt());
        for j in 0..level.ny {
            for i in 0..level.nx {
                if level.is_boundary(i, j) {
                    u.set(i, j, 0.0);
                }
            }
        }
        Self::new(level, u, h00)
    }

    /// `(H_m, H_c)`: minimum film over the interior and film at the centre point.
    pub fn hm_hc(&self) -> (f64, f64) {
        let l = self.level;
        let mut hm = f64::INFINITY;
        for j in 1..l.ny - 1 {
            for i in 1..l.nx - 1 {
                hm = hm.min(self.h.get(i, j));
            }
        }
        let ic = ((0.0 - l.x0) / l.hx).round() as usize;
        let jc = ((0.0 - l.y0) / l.hy).round() as usize;
        (hm, self.h.get(ic.min(l.nx - 1), jc.min(l.ny - 1)))
    }

    /// `h_x h_y Σ u` over the grid.
    pub fn load(&self) -> f64 {
        self.level.hx * self.level.hy * self.u.values.iter().sum::<f64>()
    }
}
