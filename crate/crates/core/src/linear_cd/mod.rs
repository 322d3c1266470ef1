//! Linear convection–diffusion model problem `(a u)_x − εΔu = f` on
//! `[−1, 1]²` with the manufactured solution `u = x⁴ + y⁴`, discretised by
//! the κ-scheme and solved by line-splitting multigrid.

mod multigrid;
mod operator;
mod smoother;

pub use multigrid::{
    defect_correction_cycle, dense_solve, direct_solution, exact_error, level_data, mg_solve, residual_decay, v_cycle, CdLevel,
    CycleSpec, MgHierarchy,
};
pub use operator::{assemble_kappa_operator, CdOperator, LineStencil, SplitParts};
pub use smoother::{line_matrix_ls3, sweep};

use crate::grid::{make_hierarchy, GridHierarchy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingKind {
    Ls0,
    Ls1,
    Ls2,
    Ls3,
    DefectCorrection,
}

impl SplittingKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ls0" => Ok(Self::Ls0),
            "ls1" => Ok(Self::Ls1),
            "ls2" => Ok(Self::Ls2),
            "ls3" => Ok(Self::Ls3),
            "defect_correction" | "dc" => Ok(Self::DefectCorrection),
            other => Err(Error::Config(format!("unknown splitting `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ls0 => "ls0",
            Self::Ls1 => "ls1",
            Self::Ls2 => "ls2",
            Self::Ls3 => "ls3",
            Self::DefectCorrection => "defect_correction",
        }
    }

    /// Default under-relaxation.
    pub fn default_omega(&self) -> f64 {
        match self {
            Self::Ls3 => 0.7,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdProblem {
    pub a: f64,
    pub eps: f64,
    pub kappa: f64,
    pub hierarchy: GridHierarchy,
}

impl CdProblem {
    /// `[−1, 1]²`, levels `coarsest_n, 2(coarsest_n−1)+1, …`.
    pub fn new(a: f64, eps: f64, kappa: f64, coarsest_n: usize, levels: usize) -> Result<Self> {
        if !(eps > 0.0) || !(a >= 0.0) {
            return Err(Error::InvalidInput(format!("need eps > 0 and a >= 0, got eps = {eps}, a = {a}")));
        }
        if !(-1.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidInput(format!("kappa {kappa} outside [-1, 1]")));
        }
        Ok(Self { a, eps, kappa, hierarchy: make_hierarchy([-1.0, -1.0, 1.0, 1.0], coarsest_n, levels)? })
    }

    pub fn exact(&self, x: f64, y: f64) -> f64 {
        x.powi(4) + y.powi(4)
    }

    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        self.a * 4.0 * x.powi(3) - self.eps * 12.0 * (x * x + y * y)
    }
}
