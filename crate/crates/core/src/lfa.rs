//! Local Fourier analysis of the x-line splittings of the linear
//! convection–diffusion operator: smoothing factors, two-grid spectral radii
//! and a measured one-sweep check.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, GridLevel};
use crate::linear_cd::{sweep, CdOperator, LineStencil, SplittingKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSample {
    pub theta1: f64,
    pub theta2: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolReport {
    /// Largest modulus over the sampled set.
    pub mu: f64,
    /// Two-grid spectral radius, when computed.
    pub rho_2g: Option<f64>,
    pub samples: Vec<FourierSample>,
    pub argmax: (f64, f64),
    /// Samples dropped because a denominator vanished.
    pub skipped: usize,
}

/// `θ_k = −π + 2πk/n`, `k = 1..=n`: `n` points covering `(−π, π]`.
pub fn theta_axis(n: usize) -> Vec<f64> {
    (1..=n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect()
}

/// Outside `(−π/2, π/2]²`.
pub fn is_high(t1: f64, t2: f64) -> bool {
    let low = |t: f64| t > -PI / 2.0 && t <= PI / 2.0;
    !(low(t1) && low(t2))
}

/// Fourier symbol of a line stencil, `Σ c e^{i(dx θ₁ + dy θ₂)}`.
pub fn stencil_symbol(s: &LineStencil, t1: f64, t2: f64) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for (dy, row) in s.c.iter().enumerate() {
        for (dx, &c) in row.iter().enumerate() {
            if c != 0.0 {
                let ph = (dx as f64 - 2.0) * t1 + (dy as f64 - 1.0) * t2;
                z += c * Complex64::from_polar(1.0, ph);
            }
        }
    }
    z
}

/// Amplification of the κ line relaxation in closed form, with
/// `α₁ = ε/h²`, `β = a/h`. With `printed` the sign of the `α₁e^{iθ₂}` term
/// follows the published formula, otherwise the one that makes the
/// numerator equal to `−L̂⁻`. `None` where the denominator vanishes.
pub fn kappa_symbol(alpha1: f64, beta: f64, kappa: f64, t1: f64, t2: f64, printed: bool) -> Option<Complex64> {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let c = 1.25 - 0.75 * kappa;
    let conv = 0.25 * beta * (1.0 + kappa) * (e(t1) - 1.0) - 0.25 * beta * (1.0 - kappa) * (1.0 - e(-2.0 * t1));
    let num = if printed { alpha1 * e(t2) + conv } else { alpha1 * e(t2) - conv };
    let den = (-alpha1 - beta * c) * e(-t1) + 4.0 * alpha1 + beta * c - alpha1 * (e(t1) + e(-t2));
    (den.norm() > 1e-14 * (alpha1 + beta)).then(|| num / den)
}

/// `−L̂⁻/L̂⁺` from the stencil decomposition of a splitting.
pub fn split_symbol(op: &CdOperator, kind: SplittingKind, t1: f64, t2: f64) -> Result<Option<Complex64>> {
    if kind == SplittingKind::Ls3 {
        return Err(Error::Unsupported("distributive splitting has no pointwise Fourier symbol here".into()));
    }
    let p = op.split(kind);
    let plus = stencil_symbol(&p.plus, t1, t2) + stencil_symbol(&p.zero, t1, t2);
    let minus = stencil_symbol(&p.minus, t1, t2);
    let scale = op.alpha1() + op.beta();
    Ok((plus.norm() > 1e-14 * scale).then(|| -minus / plus))
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 samples per axis, got {n}")));
    }
    Ok(())
}

fn smoothing_report(n: usize, f: impl Fn(f64, f64) -> Option<Complex64>) -> SymbolReport {
    let axis = theta_axis(n);
    let mut rep = SymbolReport { mu: 0.0, rho_2g: None, samples: Vec::new(), argmax: (0.0, 0.0), skipped: 0 };
    for &t2 in &axis {
        for &t1 in &axis {
            if !is_high(t1, t2) {
                continue;
            }
            match f(t1, t2) {
                Some(value) => {
                    if value.norm() > rep.mu {
                        rep.mu = value.norm();
                        rep.argmax = (t1, t2);
                    }
                    rep.samples.push(FourierSample { theta1: t1, theta2: t2, value });
                }
                None => rep.skipped += 1,
            }
        }
    }
    rep
}

/// Smoothing factor of the κ line relaxation over `Θ_high`, sampled on an
/// `n × n` grid of `(−π, π]²`.
pub fn smoothing_factor_kappa(alpha1: f64, beta: f64, kappa: f64, n: usize) -> Result<SymbolReport> {
    check_n(n)?;
    if !(alpha1 >= 0.0 && beta >= 0.0 && alpha1 + beta > 0.0) {
        return Err(Error::InvalidInput("need α₁ ≥ 0, β ≥ 0, not both zero".into()));
    }
    Ok(smoothing_report(n, |t1, t2| kappa_symbol(alpha1, beta, kappa, t1, t2, false)))
}

/// Smoothing factor of any pointwise-symbol splitting of `op`.
pub fn smoothing_factor_split(op: &CdOperator, kind: SplittingKind, n: usize) -> Result<SymbolReport> {
    check_n(n)?;
    split_symbol(op, kind, 0.0, PI)?;
    Ok(smoothing_report(n, |t1, t2| split_symbol(op, kind, t1, t2).ok().flatten()))
}

/// `¼(1 + cos θ₁)(1 + cos θ₂)`, the symbol of full weighting and, per
/// harmonic, of bilinear interpolation.
fn transfer_symbol(t1: f64, t2: f64) -> f64 {
    0.25 * (1.0 + t1.cos()) * (1.0 + t2.cos())
}

fn shift(t: f64) -> f64 {
    if t > 0.0 {
        t - PI
    } else {
        t + PI
    }
}

/// Spectral radius of a 4×4 complex matrix from its Schur form.
fn spectral_radius(m: &Matrix4<Complex64>) -> f64 {
    let t = m.clone().schur().unpack().1;
    (0..4).map(|k| t[(k, k)].norm()).fold(0.0, f64::max)
}

/// Two-grid spectral radius `sup ρ(S^{ν₂} (I − P L̂_{2h}⁻¹ R L̂_h) S^{ν₁})`
/// over `θ ∈ (−π/2, π/2]²`, using the coarse operator `op.coarser()`,
/// full weighting and bilinear interpolation. Frequencies where the coarse
/// symbol vanishes are skipped.
pub fn two_grid_radius(op: &CdOperator, kind: SplittingKind, nu1: usize, nu2: usize, n: usize) -> Result<SymbolReport> {
    check_n(n)?;
    split_symbol(op, kind, 0.0, PI)?;
    let coarse = op.coarser();
    let (lh, l2h) = (op.stencil(), coarse.stencil());
    let scale = op.alpha1() + op.beta();
    let axis = theta_axis(2 * n);
    let mut rep = SymbolReport { mu: 0.0, rho_2g: None, samples: Vec::new(), argmax: (0.0, 0.0), skipped: 0 };
    let mut rho = 0.0f64;
    let one = Complex64::new(1.0, 0.0);
    for &t2 in &axis {
        for &t1 in &axis {
            if is_high(t1, t2) {
                continue;
            }
            let lc = stencil_symbol(&l2h, 2.0 * t1, 2.0 * t2);
            if lc.norm() <= 1e-12 * scale {
                rep.skipped += 1;
                continue;
            }
            let harm = [(t1, t2), (shift(t1), shift(t2)), (shift(t1), t2), (t1, shift(t2))];
            let mut s = Vector4::zeros();
            let mut l = Vector4::zeros();
            let mut r = Vector4::zeros();
            let mut skip = false;
            for (k, &(a, b)) in harm.iter().enumerate() {
                match split_symbol(op, kind, a, b)? {
                    Some(v) => s[k] = v,
                    None => skip = true,
                }
                l[k] = stencil_symbol(&lh, a, b);
                r[k] = Complex64::new(transfer_symbol(a, b), 0.0);
            }
            if skip {
                rep.skipped += 1;
                continue;
            }
            let mut m = Matrix4::<Complex64>::identity();
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] -= r[i] * r[j] * l[j] / lc;
                }
            }
            let sm = Matrix4::from_diagonal(&s);
            let mut pre = Matrix4::identity();
            for _ in 0..nu1 {
                pre = sm * pre;
            }
            let mut post = Matrix4::identity();
            for _ in 0..nu2 {
                post = sm * post;
            }
            let full = post * m * pre;
            let v = spectral_radius(&full);
            rep.samples.push(FourierSample { theta1: t1, theta2: t2, value: v * one });
            if v > rho {
                rho = v;
                rep.argmax = (t1, t2);
            }
        }
    }
    rep.rho_2g = Some(rho);
    rep.mu = smoothing_factor_split(op, kind, 2 * n)?.mu;
    Ok(rep)
}

/// One sweep of `kind` applied to the error `cos(θ₁i + θ₂j)` on an `n × n`
/// grid with zero boundary values and zero data; returns the ratio of the
/// error amplitudes over the central half of the grid.
pub fn measured_smoothing(op: &CdOperator, kind: SplittingKind, theta: (f64, f64), n: usize) -> Result<f64> {
    if n < 9 {
        return Err(Error::InvalidInput("grid too small for a measurement".into()));
    }
    let level = GridLevel::new([0.0, 0.0, (n - 1) as f64 * op.h, (n - 1) as f64 * op.h], n, n)?;
    let mut e = Field::zeros(level);
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            e.set(i, j, (theta.0 * i as f64 + theta.1 * j as f64).cos());
        }
    }
    let amp = |f: &Field| {
        let (lo, hi) = (n / 4, 3 * n / 4);
        let mut s = 0.0;
        for j in lo..hi {
            for i in lo..hi {
                s += f.get(i, j) * f.get(i, j);
            }
        }
        s.sqrt()
    };
    let before = amp(&e);
    if before == 0.0 {
        return Ok(0.0);
    }
    let f = Field::zeros(level);
    sweep(op, kind, &mut e, &f, &vec![0.0; n], kind.default_omega())?;
    Ok(amp(&e) / before)
}

/// `(θ₁, θ₂, |Ŝ|)` over the whole `n × n` sample grid, for surface plots.
pub fn smoothing_surface(alpha1: f64, beta: f64, kappa: f64, n: usize) -> Result<Vec<(f64, f64, f64)>> {
    check_n(n)?;
    let axis = theta_axis(n);
    let mut out = Vec::with_capacity(n * n);
    for &t2 in &axis {
        for &t1 in &axis {
            let v = kappa_symbol(alpha1, beta, kappa, t1, t2, false).map_or(f64::NAN, |z| z.norm());
            out.push((t1, t2, v));
        }
    }
    Ok(out)
}
