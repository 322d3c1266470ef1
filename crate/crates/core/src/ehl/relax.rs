use super::film::FilmOperator;
use super::operator::{apply_at, face_fluxes, line_q, refresh_coefficients};
use super::{EhlConfig, Hybrid, LcpLevelState};
use crate::banded::{solve_banded, LineSystem};
use crate::error::Result;
use crate::grid::Field;
use crate::kernel::{distributed_coeff, KernelTable};
use crate::limiter::{limiter_phi, regularized_ratio, LimiterSpec};
use crate::physics::face_mean;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    GaussSeidel,
    JacobiDistributed,
}

/// Gauss–Seidel where `min(ε/h_x, ε/h_y)` exceeds the threshold.
pub fn select_splitting(eps: f64, hx: f64, hy: f64, threshold: f64) -> LineKind {
    if (eps / hx).min(eps / hy) > threshold {
        LineKind::GaussSeidel
    } else {
        LineKind::JacobiDistributed
    }
}

/// Settings of one line relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSettings {
    pub spec: LimiterSpec,
    pub hybrid: Hybrid,
    pub threshold: f64,
    pub radius: usize,
    /// Overrides the pointwise switch.
    pub force: Option<LineKind>,
}

impl LineSettings {
    pub fn from_config(cfg: &EhlConfig) -> Self {
        Self { spec: cfg.spec, hybrid: cfg.hybrid, threshold: cfg.switch_threshold, radius: cfg.window_radius, force: None }
    }
}

/// Limiter values of the faces of line `j` from the current `ρH`, clamped to
/// `[0, 2]`. Only the iteration matrix uses them.
fn frozen_phi(q: &[f64], spec: LimiterSpec) -> Vec<f64> {
    let mut phi = vec![0.0; q.len() - 1];
    for i in 1..q.len() - 1 {
        let r = regularized_ratio(q[i + 1] - q[i], q[i] - q[i - 1]);
        phi[i] = limiter_phi(spec, r).clamp(0.0, 2.0);
    }
    phi
}

/// Pentadiagonal system for the changes along line `j`, plus the kind of
/// change (pointwise or distributed) chosen at every interior point.
pub fn line_system(
    state: &LcpLevelState,
    table: &KernelTable,
    set: &LineSettings,
    j: usize,
    residual: &[f64],
) -> (LineSystem, Vec<LineKind>) {
    let l = state.level;
    let (nx, ny) = (l.nx, l.ny);
    let (hx2, hy2) = (l.hx * l.hx, l.hy * l.hy);
    let n = nx - 2;
    let q = line_q(state, j);
    let phi = frozen_phi(&q, set.spec);
    let kinds: Vec<LineKind> = (1..nx - 1)
        .map(|m| set.force.unwrap_or_else(|| select_splitting(state.eps.get(m, j), l.hx, l.hy, set.threshold)))
        .collect();
    let r = set.radius as isize;
    let interior = |x: isize, y: isize| x >= 1 && y >= 1 && (x as usize) < nx - 1 && (y as usize) < ny - 1;
    // film change at (k, j) from a unit change of column m
    let kern = |k: usize, m: usize| -> f64 {
        if (k as isize - m as isize).abs() > r {
            return 0.0;
        }
        match kinds[m - 1] {
            LineKind::GaussSeidel => table.at(k.abs_diff(m), 0),
            LineKind::JacobiDistributed => distributed_coeff(table, k, j, m),
        }
    };
    let mut sys = LineSystem::zeros(n);
    for i in 1..nx - 1 {
        let row = i - 1;
        sys.rhs[row] = residual[row];
        if state.u.get(i, j) <= state.lower_f2.get(i, j) && residual[row] <= 0.0 {
            sys.bands[row] = [0.0, 0.0, 1.0, 0.0, 0.0];
            sys.rhs[row] = 0.0;
            continue;
        }
        let e0 = state.eps.get(i, j);
        let (exp, exm) = (face_mean(e0, state.eps.get(i + 1, j)) / hx2, face_mean(e0, state.eps.get(i - 1, j)) / hx2);
        let (eyp, eym) = (face_mean(e0, state.eps.get(i, j + 1)) / hy2, face_mean(e0, state.eps.get(i, j - 1)) / hy2);
        let diff = |x: isize, y: isize| -> f64 {
            let (dx, dy) = (x - i as isize, y - j as isize);
            match (dx, dy) {
                (0, 0) => exp + exm + eyp + eym,
                (1, 0) => -exp,
                (-1, 0) => -exm,
                (0, 1) => -eyp,
                (0, -1) => -eym,
                _ => 0.0,
            }
        };
        let mut c_in = 1.0 + 0.5 * phi[i];
        if set.hybrid == Hybrid::Hs2 {
            c_in += 0.5 * phi[i - 1];
        }
        let c_in = c_in / l.hx;
        for band in 0..5 {
            let m = i as isize + band as isize - 2;
            if !interior(m, j as isize) {
                continue;
            }
            let mu = m as usize;
            let (mi, ji) = (m, j as isize);
            let mut c = match kinds[mu - 1] {
                LineKind::GaussSeidel => diff(mi, ji),
                LineKind::JacobiDistributed => {
                    let mut s = diff(mi, ji);
                    for (x, y) in [(mi - 1, ji), (mi + 1, ji), (mi, ji - 1), (mi, ji + 1)] {
                        if interior(x, y) {
                            s -= 0.25 * diff(x, y);
                        }
                    }
                    s
                }
            };
            c += c_in * (state.rho.get(i, j) * kern(i, mu) - state.rho.get(i - 1, j) * kern(i - 1, mu));
            sys.bands[row][band] = c;
        }
    }
    (sys, kinds)
}

/// One forward sweep over all lines. Pointwise changes are applied at once;
/// distributed changes are collected and applied after the sweep. The film
/// and the coefficients are refreshed at the end. Returns `‖σ‖∞`.
pub fn relax_sweep(state: &mut LcpLevelState, film: &FilmOperator, cfg: &EhlConfig, force: Option<LineKind>) -> Result<f64> {
    let set = LineSettings { force, ..LineSettings::from_config(cfg) };
    let (sigma, cav, gs) = sweep_lines(state, &film.table, &set, cfg.omega_gs)?;
    let change = distribute(state, &sigma, &cav, cfg.omega_jac).max(gs);
    film.update(state)?;
    refresh_coefficients(state, &cfg.physics);
    Ok(change)
}

/// Distributed-only sweep; returns the collected `σ` before it is applied.
pub fn line_jacobi_distributed(state: &mut LcpLevelState, film: &FilmOperator, cfg: &EhlConfig) -> Result<Field> {
    let set = LineSettings { force: Some(LineKind::JacobiDistributed), ..LineSettings::from_config(cfg) };
    let (sigma, cav, _) = sweep_lines(state, &film.table, &set, cfg.omega_gs)?;
    distribute(state, &sigma, &cav, cfg.omega_jac);
    film.update(state)?;
    refresh_coefficients(state, &cfg.physics);
    Ok(sigma)
}

/// Returns the distributed changes, a mask of cavitated points and `‖σ‖∞` of the pointwise ones.
fn sweep_lines(state: &mut LcpLevelState, table: &KernelTable, set: &LineSettings, omega_gs: f64) -> Result<(Field, Field, f64)> {
    let l = state.level;
    let mut jd = Field::zeros(l);
    let mut cav = Field::zeros(l);
    let mut change = 0.0f64;
    for j in 1..l.ny - 1 {
        let fl = face_fluxes(&line_q(state, j), set.spec);
        let res: Vec<f64> = (1..l.nx - 1).map(|i| state.rhs_f1.get(i, j) - apply_at(state, &fl, i, j)).collect();
        let (sys, kinds) = line_system(state, table, set, j, &res);
        let sigma = solve_banded(&sys)?;
        for (k, (&s, kind)) in sigma.iter().zip(&kinds).enumerate() {
            let i = k + 1;
            if sys.bands[k] == [0.0, 0.0, 1.0, 0.0, 0.0] && sys.rhs[k] == 0.0 {
                cav.set(i, j, 1.0);
            }
            match kind {
                LineKind::GaussSeidel => {
                    let lo = state.lower_f2.get(i, j);
                    let v = (state.u.get(i, j) + omega_gs * s).max(lo);
                    change = change.max((v - state.u.get(i, j)).abs());
                    state.u.set(i, j, v);
                }
                LineKind::JacobiDistributed => jd.set(i, j, s),
            }
        }
    }
    Ok((jd, cav, change))
}

/// Applies `δ = σ − ¼Σσ_nbr`; cavitated points receive nothing.
fn distribute(state: &mut LcpLevelState, s: &Field, cav: &Field, omega: f64) -> f64 {
    let l = state.level;
    let mut change = 0.0f64;
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            let d = s.get(i, j) - 0.25 * (s.get(i - 1, j) + s.get(i + 1, j) + s.get(i, j - 1) + s.get(i, j + 1));
            if d == 0.0 || cav.get(i, j) != 0.0 {
                continue;
            }
            let lo = state.lower_f2.get(i, j);
            let v = (state.u.get(i, j) + omega * d).max(lo);
            change = change.max((v - state.u.get(i, j)).abs());
            state.u.set(i, j, v);
        }
    }
    change
}
