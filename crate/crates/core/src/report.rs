//! Solver reports shared by the linear and EHL drivers.

use crate::error::Result;
use crate::grid::{convergence_order, error_norms, ErrorNorms, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxCycles,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub nx: usize,
    pub ny: usize,
    pub cycles: usize,
    /// Interior L∞ residual before the first cycle and after each cycle.
    pub residual_history: Vec<f64>,
    pub wall_time: f64,
    /// `(H_m, H_c)` for EHL runs.
    pub hm_hc: Option<(f64, f64)>,
    /// Error against a known exact solution, when there is one.
    pub exact_error: Option<ErrorNorms>,
}

/// Difference between the solutions on two successive levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRecord {
    /// Cells per axis on the finer level of the pair.
    pub n_fine: usize,
    pub norms: ErrorNorms,
    /// Orders `(p1, p2, p∞)` against the previous pair.
    pub orders: [Option<f64>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub levels: Vec<LevelRecord>,
    pub pairs: Vec<PairRecord>,
    pub status: SolveStatus,
}

impl SolveReport {
    /// Residual history of the finest level reached.
    pub fn residual_history(&self) -> &[f64] {
        self.levels.last().map(|l| l.residual_history.as_slice()).unwrap_or(&[])
    }

    pub fn wall_times(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.wall_time).collect()
    }

    pub fn finest_pair(&self) -> Option<&PairRecord> {
        self.pairs.last()
    }
}

/// Successive-grid errors and orders for solutions ordered coarse to fine.
pub fn pair_records(solutions: &[Field]) -> Result<Vec<PairRecord>> {
    let mut out: Vec<PairRecord> = Vec::new();
    for w in solutions.windows(2) {
        let norms = error_norms(&w[0], &w[1])?;
        let orders = match out.last() {
            Some(prev) => [
                convergence_order(prev.norms.l1, norms.l1),
                convergence_order(prev.norms.l2, norms.l2),
                convergence_order(prev.norms.linf, norms.linf),
            ],
            None => [None; 3],
        };
        out.push(PairRecord { n_fine: w[1].level.nx - 1, norms, orders });
    }
    Ok(out)
}
