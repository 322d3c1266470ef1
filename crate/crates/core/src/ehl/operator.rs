use super::LcpLevelState;
use crate::grid::Field;
use crate::limiter::LimiterSpec;
use crate::physics::{face_mean, PhysicsParams};

/// Recomputes `ρ(u)` and `ε = ρH³/(ηλ)`; a non-positive film gives `ε = 0`.
pub fn refresh_coefficients(state: &mut LcpLevelState, physics: &PhysicsParams) {
    for k in 0..state.u.values.len() {
        let u = state.u.values[k];
        let h = state.h.values[k].max(0.0);
        let rho = physics.density(u);
        state.rho.values[k] = rho;
        state.eps.values[k] = rho * h * h * h / (physics.viscosity(u) * physics.lambda);
    }
}

/// Limited fluxes along one line: entry `i` is the flux through face
/// `i+1/2`. The face next to the inflow boundary is first order.
pub fn face_fluxes(q: &[f64], spec: LimiterSpec) -> Vec<f64> {
    let n = q.len();
    let mut f = Vec::with_capacity(n - 1);
    f.push(q[0]);
    for i in 1..n - 1 {
        f.push(q[i] + spec.increment(q[i] - q[i - 1], q[i + 1] - q[i]));
    }
    f
}

/// `(ρH)` along line `j`.
pub(crate) fn line_q(state: &LcpLevelState, j: usize) -> Vec<f64> {
    (0..state.level.nx).map(|i| state.rho.get(i, j) * state.h.get(i, j)).collect()
}

/// `L(u)` at `(i, j)`: `∂ₓ(ρH)* − ∇·(ε∇u)`, given the fluxes of line `j`.
pub(crate) fn apply_at(state: &LcpLevelState, fluxes: &[f64], i: usize, j: usize) -> f64 {
    let l = state.level;
    let (u, e) = (&state.u, &state.eps);
    let e0 = e.get(i, j);
    let (exp, exm) = (face_mean(e0, e.get(i + 1, j)), face_mean(e0, e.get(i - 1, j)));
    let (eyp, eym) = (face_mean(e0, e.get(i, j + 1)), face_mean(e0, e.get(i, j - 1)));
    let u0 = u.get(i, j);
    let dxx = (exp * (u.get(i + 1, j) - u0) - exm * (u0 - u.get(i - 1, j))) / (l.hx * l.hx);
    let dyy = (eyp * (u.get(i, j + 1) - u0) - eym * (u0 - u.get(i, j - 1))) / (l.hy * l.hy);
    (fluxes[i] - fluxes[i - 1]) / l.hx - dxx - dyy
}

/// `r = f₁ − L(u)` on the interior, zero on the boundary. Where `u > 0` a
/// converged state has `r = 0`; where `u = 0` it has `r ≤ 0`.
pub fn ehl_residual(state: &LcpLevelState, spec: LimiterSpec) -> Field {
    let l = state.level;
    let mut r = Field::zeros(l);
    for j in 1..l.ny - 1 {
        let fl = face_fluxes(&line_q(state, j), spec);
        for i in 1..l.nx - 1 {
            r.set(i, j, state.rhs_f1.get(i, j) - apply_at(state, &fl, i, j));
        }
    }
    r
}

/// Largest violation of the complementarity conditions.
pub fn lcp_residual_norm(state: &LcpLevelState, r: &Field) -> f64 {
    let l = state.level;
    let mut m = 0.0f64;
    for j in 1..l.ny - 1 {
        for i in 1..l.nx - 1 {
            let v = r.get(i, j);
            m = m.max(if state.u.get(i, j) > state.lower_f2.get(i, j) { v.abs() } else { v.max(0.0) });
        }
    }
    m
}

/// Residual passed to the coarse grid: at points on the obstacle only the
/// violated part `max(r, 0)` is kept.
pub fn restricted_residual(state: &LcpLevelState, r: &Field) -> Field {
    let mut out = r.clone();
    for k in 0..out.values.len() {
        if state.u.values[k] <= state.lower_f2.values[k] {
            out.values[k] = out.values[k].max(0.0);
        }
    }
    out
}
