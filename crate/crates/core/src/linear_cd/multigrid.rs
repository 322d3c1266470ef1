use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use super::operator::CdOperator;
use super::smoother::sweep;
use super::{CdProblem, SplittingKind};
use crate::error::{Error, Result};
use crate::grid::{prolong_full, restrict_full_weighting, ErrorNorms, Field, GridLevel};
use crate::report::{pair_records, LevelRecord, SolveReport, SolveStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    pub nu1: usize,
    pub nu2: usize,
    /// 1 = V-cycle, 2 = W-cycle.
    pub gamma: usize,
    pub max_cycles: usize,
    /// Stop once the residual has dropped by this factor.
    pub rel_tol: f64,
    /// `None` takes the splitting's default.
    pub omega: Option<f64>,
}

impl Default for CycleSpec {
    fn default() -> Self {
        Self { nu1: 2, nu2: 1, gamma: 1, max_cycles: 30, rel_tol: 1e-10, omega: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdLevel {
    pub level: GridLevel,
    pub op: CdOperator,
}

/// Operators on every level, coarsest first.
#[derive(Debug, Clone, PartialEq)]
pub struct MgHierarchy {
    pub levels: Vec<CdLevel>,
    pub kind: SplittingKind,
    pub omega: f64,
    pub nu1: usize,
    pub nu2: usize,
    pub gamma: usize,
    /// First-order operators for the inner solve of defect correction.
    pub low: Option<Box<MgHierarchy>>,
}

impl MgHierarchy {
    pub fn new(problem: &CdProblem, kind: SplittingKind, spec: &CycleSpec) -> Self {
        let omega = spec.omega.unwrap_or(kind.default_omega());
        let mk = |first_order: bool| -> Vec<CdLevel> {
            problem
                .hierarchy
                .levels
                .iter()
                .map(|&level| {
                    let op = if first_order {
                        CdOperator::first_order(problem.a, problem.eps, level.hx)
                    } else {
                        CdOperator::kappa(problem.a, problem.eps, level.hx, problem.kappa)
                    };
                    CdLevel { level, op }
                })
                .collect()
        };
        let low = (kind == SplittingKind::DefectCorrection).then(|| {
            Box::new(MgHierarchy {
                levels: mk(true),
                kind: SplittingKind::Ls2,
                omega: 1.0,
                nu1: spec.nu1,
                nu2: spec.nu2,
                gamma: spec.gamma,
                low: None,
            })
        });
        Self { levels: mk(false), kind, omega, nu1: spec.nu1, nu2: spec.nu2, gamma: spec.gamma, low }
    }
}

/// Solves for the interior unknowns exactly; boundary values and `ghost` are data.
pub fn dense_solve(op: &CdOperator, u: &mut Field, f: &Field, ghost: &[f64]) -> Result<()> {
    let l = u.level;
    let (mx, my) = (l.nx - 2, l.ny - 2);
    let n = mx * my;
    let id = |i: usize, j: usize| (j - 1) * mx + (i - 1);
    let mut base = u.clone();
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            base.set(i, j, 0.0);
        }
    }
    let st = op.stencil().c;
    let mut a = DMatrix::zeros(n, n);
    let mut b = DVector::zeros(n);
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            let row = id(i, j);
            b[row] = f.get(i, j) - op.apply_at(&base, ghost, i, j);
            for (dy, srow) in st.iter().enumerate() {
                for (dx, &c) in srow.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let (ii, jj) = (i as isize + dx as isize - 2, j as isize + dy as isize - 1);
                    if ii >= 1 && jj >= 1 && (ii as usize) < l.nx - 1 && (jj as usize) < l.ny - 1 {
                        a[(row, id(ii as usize, jj as usize))] += c;
                    }
                }
            }
        }
    }
    let x = a.lu().solve(&b).ok_or_else(|| Error::InvalidInput("singular coarse-grid operator".into()))?;
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            u.set(i, j, x[id(i, j)]);
        }
    }
    Ok(())
}

/// One correction-scheme cycle on level `l` (index into `h.levels`).
pub fn v_cycle(h: &MgHierarchy, l: usize, u: &mut Field, f: &Field, ghost: &[f64]) -> Result<()> {
    let op = &h.levels[l].op;
    if l == 0 {
        return dense_solve(op, u, f, ghost);
    }
    for _ in 0..h.nu1 {
        sweep(op, h.kind, u, f, ghost, h.omega)?;
    }
    let r = op.residual(u, f, ghost);
    let rc = restrict_full_weighting(&r)?;
    let cl = h.levels[l - 1].level;
    let zero_ghost = vec![0.0; cl.ny];
    let mut e = Field::zeros(cl);
    for _ in 0..h.gamma.max(1) {
        v_cycle(h, l - 1, &mut e, &rc, &zero_ghost)?;
        if l - 1 == 0 {
            break;
        }
    }
    let ef = prolong_full(&e);
    for j in 1..u.level.ny - 1 {
        for i in 1..u.level.nx - 1 {
            u.add(i, j, ef.get(i, j));
        }
    }
    for _ in 0..h.nu2 {
        sweep(op, h.kind, u, f, ghost, h.omega)?;
    }
    Ok(())
}

/// `L_low u⁺ = f − (L_high − L_low) u`, solved by one first-order V-cycle
/// started from `u` (in correction form).
pub fn defect_correction_cycle(high: &CdOperator, low: &MgHierarchy, l: usize, u: &mut Field, f: &Field, ghost: &[f64]) -> Result<()> {
    let r = high.residual(u, f, ghost);
    let mut e = Field::zeros(u.level);
    v_cycle(low, l, &mut e, &r, &vec![0.0; u.level.ny])?;
    for j in 1..u.level.ny - 1 {
        for i in 1..u.level.nx - 1 {
            u.add(i, j, e.get(i, j));
        }
    }
    Ok(())
}

fn cycle(h: &MgHierarchy, l: usize, u: &mut Field, f: &Field, ghost: &[f64]) -> Result<()> {
    match &h.low {
        Some(low) => defect_correction_cycle(&h.levels[l].op, low, l, u, f, ghost),
        None => v_cycle(h, l, u, f, ghost),
    }
}

/// Right-hand side, boundary values and ghost column of the original problem.
pub fn level_data(problem: &CdProblem, level: &GridLevel) -> (Field, Field, Vec<f64>) {
    let f = Field::from_fn(*level, |x, y| problem.rhs(x, y));
    let mut u = Field::zeros(*level);
    set_boundary(problem, &mut u);
    let xg = level.x0 - level.hx;
    let ghost = (0..level.ny).map(|j| problem.exact(xg, level.y(j))).collect();
    (f, u, ghost)
}

fn set_boundary(problem: &CdProblem, u: &mut Field) {
    let l = u.level;
    for j in 0..l.ny {
        for i in 0..l.nx {
            if l.is_boundary(i, j) {
                u.set(i, j, problem.exact(l.x(i), l.y(j)));
            }
        }
    }
}

pub fn exact_error(problem: &CdProblem, u: &Field) -> ErrorNorms {
    let l = u.level;
    let (mut s1, mut s2, mut m) = (0.0, 0.0, 0.0f64);
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            let d = (u.get(i, j) - problem.exact(l.x(i), l.y(j))).abs();
            s1 += d;
            s2 += d * d;
            m = m.max(d);
        }
    }
    let area = l.hx * l.hy;
    ErrorNorms { l1: area * s1, l2: (area * s2).sqrt(), linf: m }
}

/// Runs cycles on level `l` until the residual falls by `spec.rel_tol`, the
/// cycle budget is spent, or the residual grows tenfold.
fn iterate(h: &MgHierarchy, l: usize, u: &mut Field, f: &Field, ghost: &[f64], spec: &CycleSpec) -> Result<(Vec<f64>, SolveStatus)> {
    let op = &h.levels[l].op;
    let r0 = op.residual(u, f, ghost).interior_max_abs();
    let mut hist = vec![r0];
    if l == 0 {
        cycle(h, 0, u, f, ghost)?;
        hist.push(op.residual(u, f, ghost).interior_max_abs());
        return Ok((hist, SolveStatus::Converged));
    }
    for _ in 0..spec.max_cycles {
        if r0 == 0.0 {
            return Ok((hist, SolveStatus::Converged));
        }
        cycle(h, l, u, f, ghost)?;
        let r = op.residual(u, f, ghost).interior_max_abs();
        hist.push(r);
        if !r.is_finite() || r > 10.0 * r0 {
            return Ok((hist, SolveStatus::Diverged));
        }
        if r <= spec.rel_tol * r0 {
            return Ok((hist, SolveStatus::Converged));
        }
    }
    Ok((hist, SolveStatus::MaxCycles))
}

/// Nested iteration from the coarsest level up with the given splitting.
pub fn mg_solve(problem: &CdProblem, kind: SplittingKind, spec: &CycleSpec) -> Result<SolveReport> {
    let h = MgHierarchy::new(problem, kind, spec);
    let mut levels = Vec::new();
    let mut solutions: Vec<Field> = Vec::new();
    let mut status = SolveStatus::Converged;
    for (l, cd) in h.levels.iter().enumerate() {
        let start = Instant::now();
        let (f, mut u, ghost) = level_data(problem, &cd.level);
        if let Some(prev) = solutions.last() {
            let p = prolong_full(prev);
            for j in 1..u.level.ny - 1 {
                for i in 1..u.level.nx - 1 {
                    u.set(i, j, p.get(i, j));
                }
            }
        }
        let (hist, st) = iterate(&h, l, &mut u, &f, &ghost, spec)?;
        levels.push(LevelRecord {
            nx: cd.level.nx,
            ny: cd.level.ny,
            cycles: hist.len() - 1,
            residual_history: hist,
            wall_time: start.elapsed().as_secs_f64(),
            hm_hc: None,
            exact_error: Some(exact_error(problem, &u)),
        });
        solutions.push(u);
        if st == SolveStatus::Diverged {
            status = st;
            break;
        }
        if st == SolveStatus::MaxCycles {
            status = st;
        }
    }
    Ok(SolveReport { levels, pairs: pair_records(&solutions)?, status })
}

/// Residual history of cycles on the finest level from a zero interior guess.
pub fn residual_decay(problem: &CdProblem, kind: SplittingKind, spec: &CycleSpec) -> Result<(Vec<f64>, SolveStatus)> {
    let h = MgHierarchy::new(problem, kind, spec);
    let l = h.levels.len() - 1;
    let (f, mut u, ghost) = level_data(problem, &h.levels[l].level);
    iterate(&h, l, &mut u, &f, &ghost, spec)
}

/// One-level exact discrete solution, for checking the iterative solvers.
pub fn direct_solution(problem: &CdProblem, level: &GridLevel) -> Result<Field> {
    let op = CdOperator::kappa(problem.a, problem.eps, level.hx, problem.kappa);
    let (f, mut u, ghost) = level_data(problem, level);
    dense_solve(&op, &mut u, &f, &ghost)?;
    Ok(u)
}
