use super::LcpLevelState;
use crate::error::Result;
use crate::grid::{Field, GridLevel};
use crate::kernel::{add_gap, build_kernel_table, deformation_direct, KernelTable};
use crate::mlmi::MlmiPlan;

/// Film-thickness evaluation on one level.
#[derive(Debug, Clone)]
pub struct FilmOperator {
    pub table: KernelTable,
    pub mlmi: Option<MlmiPlan>,
}

impl FilmOperator {
    /// Uses MLMI when asked for and the grid is large enough to coarsen,
    /// direct summation otherwise.
    pub fn new(level: &GridLevel, use_mlmi: bool, order: usize, m: usize) -> Result<Self> {
        let table = build_kernel_table(level)?;
        let mlmi = if use_mlmi && level.nx >= 65 { MlmiPlan::new(level, order, m, None).ok() } else { None };
        Ok(Self { table, mlmi })
    }

    pub fn deformation(&self, u: &Field) -> Result<Field> {
        match &self.mlmi {
            Some(plan) => plan.evaluate(u),
            None => Ok(deformation_direct(u, &self.table)),
        }
    }

    /// `H = H00 + x²/2 + y²/2 + Σ G u + hf`, written into `state.h`.
    pub fn update(&self, state: &mut LcpLevelState) -> Result<()> {
        let mut h = self.deformation(&state.u)?;
        add_gap(&mut h, state.h00);
        for (v, f) in h.values.iter_mut().zip(&state.coarse_rhs_film.values) {
            *v += f;
        }
        state.h = h;
        Ok(())
    }
}
