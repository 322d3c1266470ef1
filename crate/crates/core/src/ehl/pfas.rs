use std::time::Instant;

use super::film::FilmOperator;
use super::operator::{ehl_residual, lcp_residual_norm, refresh_coefficients, restricted_residual};
use super::relax::relax_sweep;
use super::{EhlConfig, LcpLevelState, LOAD};
use crate::error::{Error, Result};
use crate::grid::{prolong_bilinear, prolong_full, restrict_full_weighting, restrict_injection, Field};
use crate::report::{pair_records, LevelRecord, SolveReport, SolveStatus};

/// Final states of a nested-iteration run.
#[derive(Debug, Clone)]
pub struct EhlSolution {
    /// State on the finest level reached.
    pub finest: LcpLevelState,
    /// Converged pressure on every level, coarse to fine.
    pub solutions: Vec<Field>,
}

/// Force balance: `H00 ← H00 − c (g − h_x h_y Σu)` with `g = 2π/3` on the
/// finest level.
pub fn update_h00(state: &mut LcpLevelState, c: f64) {
    state.h00 -= c * (state.load_target - state.load());
}

fn refresh(state: &mut LcpLevelState, film: &FilmOperator, cfg: &EhlConfig) -> Result<()> {
    film.update(state)?;
    refresh_coefficients(state, &cfg.physics);
    Ok(())
}

fn lcp_norm(state: &LcpLevelState, cfg: &EhlConfig) -> f64 {
    lcp_residual_norm(state, &ehl_residual(state, cfg.spec))
}

/// One projected FAS cycle on level `l` of `states`. Coarser states are
/// overwritten. `H00` is corrected through the force balance on the
/// coarsest grid.
pub fn pfas_cycle(states: &mut [LcpLevelState], films: &[FilmOperator], cfg: &EhlConfig, l: usize) -> Result<()> {
    if l == 0 {
        for _ in 0..cfg.coarsest_sweeps {
            relax_sweep(&mut states[0], &films[0], cfg, None)?;
            update_h00(&mut states[0], cfg.c_h00);
            refresh(&mut states[0], &films[0], cfg)?;
            if lcp_norm(&states[0], cfg) < cfg.coarsest_tol {
                break;
            }
        }
        return Ok(());
    }
    let (lower, upper) = states.split_at_mut(l);
    let fine = &mut upper[0];
    let coarse = &mut lower[l - 1];
    for _ in 0..cfg.nu1 {
        relax_sweep(fine, &films[l], cfg, None)?;
    }
    let r = restricted_residual(fine, &ehl_residual(fine, cfg.spec));
    let rc = restrict_full_weighting(&r)?;

    let u0 = restrict_injection(&fine.u)?;
    coarse.u = u0.clone();
    coarse.h00 = fine.h00;
    coarse.load_target = fine.load_target - fine.load();
    coarse.coarse_rhs_film = Field::zeros(coarse.level);
    films[l - 1].update(coarse)?;
    let h_target = restrict_injection(&fine.h)?;
    for k in 0..h_target.values.len() {
        coarse.coarse_rhs_film.values[k] = h_target.values[k] - coarse.h.values[k];
    }
    coarse.h = h_target;
    coarse.load_target += coarse.load();
    refresh_coefficients(coarse, &cfg.physics);
    coarse.rhs_f1 = Field::zeros(coarse.level);
    let lu = ehl_residual(coarse, cfg.spec);
    for k in 0..rc.values.len() {
        coarse.rhs_f1.values[k] = rc.values[k] - lu.values[k];
    }

    let h00_before = coarse.h00;
    for _ in 0..cfg.gamma.max(1) {
        pfas_cycle(lower, films, cfg, l - 1)?;
        if l == 1 {
            break;
        }
    }

    let coarse = &lower[l - 1];
    fine.h00 += coarse.h00 - h00_before;
    let mut e = coarse.u.clone();
    for (v, w) in e.values.iter_mut().zip(&u0.values) {
        *v -= w;
    }
    let ef = prolong_bilinear(&e, &fine.u)?;
    let lv = fine.level;
    for j in 1..lv.ny - 1 {
        for i in 1..lv.nx - 1 {
            let lo = fine.lower_f2.get(i, j);
            let v = (fine.u.get(i, j) + ef.get(i, j)).max(lo);
            fine.u.set(i, j, v);
        }
    }
    refresh(fine, &films[l], cfg)?;
    for _ in 0..cfg.nu2 {
        relax_sweep(fine, &films[l], cfg, None)?;
    }
    Ok(())
}

fn check_film(state: &LcpLevelState, level: usize, iteration: usize) -> Result<()> {
    let (hm, _) = state.hm_hc();
    if !(hm > 0.0) {
        return Err(Error::NonPhysical { level, iteration, detail: format!("minimum film {hm:e}") });
    }
    Ok(())
}

/// Nested iteration: relaxation with force balance on the coarsest grid,
/// then interpolation and `cfg.cycles` projected FAS cycles per finer level.
pub fn solve_ehl(cfg: &EhlConfig) -> Result<(EhlSolution, SolveReport)> {
    cfg.validate()?;
    let hier = cfg.hierarchy()?;
    let films = hier
        .levels
        .iter()
        .map(|l| FilmOperator::new(l, !cfg.direct_film, cfg.mlmi_order, cfg.mlmi_m))
        .collect::<Result<Vec<_>>>()?;
    let mut states: Vec<LcpLevelState> = Vec::new();
    let mut solutions = Vec::new();
    let mut records = Vec::new();
    let mut status = SolveStatus::Converged;

    for (k, level) in hier.levels.iter().enumerate() {
        let start = Instant::now();
        let mut st = match states.last() {
            None => LcpLevelState::hertzian(*level, cfg.h00_init),
            Some(prev) => {
                let mut u = prolong_full(&prev.u);
                for j in 0..level.ny {
                    for i in 0..level.nx {
                        let v = if level.is_boundary(i, j) { 0.0 } else { u.get(i, j).max(0.0) };
                        u.set(i, j, v);
                    }
                }
                LcpLevelState::new(*level, u, prev.h00)
            }
        };
        refresh(&mut st, &films[k], cfg)?;
        states.push(st);
        let r0 = lcp_norm(&states[k], cfg);
        let mut hist = vec![r0];
        let mut level_status = SolveStatus::MaxCycles;
        let iterations = if k == 0 { cfg.coarse_sweeps } else { cfg.cycles };
        for it in 0..iterations {
            if k == 0 {
                relax_sweep(&mut states[0], &films[0], cfg, None)?;
            } else {
                pfas_cycle(&mut states, &films, cfg, k)?;
            }
            update_h00(&mut states[k], cfg.c_h00);
            refresh(&mut states[k], &films[k], cfg)?;
            let r = lcp_norm(&states[k], cfg);
            hist.push(r);
            if !r.is_finite() || r > 10.0 * r0.max(cfg.tol) {
                level_status = SolveStatus::Diverged;
                break;
            }
            if k == hier.levels.len() - 1 {
                check_film(&states[k], k, it)?;
            }
            let balance = (states[k].load() - LOAD).abs() / LOAD;
            if r < cfg.tol && balance < 1e-6 {
                level_status = SolveStatus::Converged;
                break;
            }
        }
        records.push(LevelRecord {
            nx: level.nx,
            ny: level.ny,
            cycles: hist.len() - 1,
            residual_history: hist,
            wall_time: start.elapsed().as_secs_f64(),
            hm_hc: Some(states[k].hm_hc()),
            exact_error: None,
        });
        solutions.push(states[k].u.clone());
        match level_status {
            SolveStatus::Diverged => {
                status = SolveStatus::Diverged;
                break;
            }
            SolveStatus::MaxCycles if status == SolveStatus::Converged => status = SolveStatus::MaxCycles,
            _ => {}
        }
    }
    let pairs = pair_records(&solutions)?;
    let finest = states.pop().expect("at least one level");
    Ok((EhlSolution { finest, solutions }, SolveReport { levels: records, pairs, status }))
}
