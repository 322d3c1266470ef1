//! Deformation kernel coefficients for piecewise-constant pressure on square
//! cells, and the direct film-thickness sum.

use crate::error::{Error, Result};
use crate::grid::{Field, GridLevel};
use std::f64::consts::PI;

/// `|a| asinh(b / a)`, with the `a = 0` limit taken as 0.
#[inline]
fn abs_asinh(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a.abs() * (b / a).asinh()
    }
}

/// Cell integral of `2/(π² r)` over the square of side `h` centred at `(dx, dy)`.
pub fn kernel_coeff(dx: f64, dy: f64, h: f64) -> f64 {
    let (xp, xm) = (dx + 0.5 * h, dx - 0.5 * h);
    let (yp, ym) = (dy + 0.5 * h, dy - 0.5 * h);
    let s = abs_asinh(xp, yp) + abs_asinh(yp, xp) - abs_asinh(xm, yp) - abs_asinh(yp, xm) - abs_asinh(xp, ym)
        - abs_asinh(ym, xp)
        + abs_asinh(xm, ym)
        + abs_asinh(ym, xm);
    2.0 / (PI * PI) * s
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub level: GridLevel,
    /// Column count (offsets along x).
    pub ni: usize,
    /// Row count (offsets along y).
    pub nj: usize,
    /// `g[dj * ni + di]`.
    pub g: Vec<f64>,
}

impl KernelTable {
    #[inline]
    pub fn at(&self, di: usize, dj: usize) -> f64 {
        self.g[dj * self.ni + di]
    }

    /// Lookup by signed offset.
    #[inline]
    pub fn get(&self, di: isize, dj: isize) -> f64 {
        self.at(di.unsigned_abs(), dj.unsigned_abs())
    }

    /// Table with offsets `0..ni` by `0..nj` at spacing `h`.
    pub fn with_extent(level: GridLevel, ni: usize, nj: usize) -> Self {
        let h = level.hx;
        let mut g = Vec::with_capacity(ni * nj);
        for dj in 0..nj {
            for di in 0..ni {
                g.push(kernel_coeff(di as f64 * h, dj as f64 * h, h));
            }
        }
        Self { level, ni, nj, g }
    }
}

pub fn build_kernel_table(level: &GridLevel) -> Result<KernelTable> {
    if ((level.hx - level.hy) / level.hx).abs() > 1e-12 {
        return Err(Error::Unsupported(format!("rectangular cells hx = {}, hy = {}", level.hx, level.hy)));
    }
    Ok(KernelTable::with_extent(*level, level.nx, level.ny))
}

/// Deformation part `Σ G u` by direct summation over all source points.
pub fn deformation_direct(u: &Field, table: &KernelTable) -> Field {
    let l = u.level;
    let mut out = Field::zeros(l);
    let src: Vec<(usize, usize, f64)> = (0..l.ny)
        .flat_map(|j| (0..l.nx).map(move |i| (i, j)))
        .filter_map(|(i, j)| {
            let v = u.get(i, j);
            (v != 0.0).then_some((i, j, v))
        })
        .collect();
    for j in 0..l.ny {
        for i in 0..l.nx {
            let mut s = 0.0;
            for &(k, m, v) in &src {
                s += table.at(i.abs_diff(k), j.abs_diff(m)) * v;
            }
            out.set(i, j, s);
        }
    }
    out
}

pub fn film_thickness_direct(u: &Field, h00: f64, table: &KernelTable) -> Field {
    let mut out = deformation_direct(u, table);
    add_gap(&mut out, h00);
    out
}

/// Adds `H00 + x²/2 + y²/2` in place.
pub fn add_gap(def: &mut Field, h00: f64) {
    let l = def.level;
    for j in 0..l.ny {
        let y = l.y(j);
        for i in 0..l.nx {
            let x = l.x(i);
            def.add(i, j, h00 + 0.5 * x * x + 0.5 * y * y);
        }
    }
}

/// Local kernel coefficients seen by point `(i, j)` from changes on its own line.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWindow {
    /// Line positions `k` of the retained columns.
    pub columns: Vec<usize>,
    /// `G` for a pointwise change at `(k, j)`.
    pub g: Vec<f64>,
    /// `σG` for a distributed change centred at `(k, j)`: the point gets `+1`
    /// and each interior neighbour `-1/4`.
    pub sigma_g: Vec<f64>,
}

/// Kernel window of half-width `radius` around `(i, j)`; columns outside the
/// interior are dropped.
pub fn sigma_kernel_window(table: &KernelTable, i: usize, j: usize, radius: usize) -> Result<KernelWindow> {
    if radius == 0 {
        return Err(Error::InvalidInput("window radius must be at least 1".into()));
    }
    let l = table.level;
    let lo = i.saturating_sub(radius).max(1);
    let hi = (i + radius).min(l.nx - 2);
    let mut w = KernelWindow { columns: vec![], g: vec![], sigma_g: vec![] };
    for k in lo..=hi {
        w.columns.push(k);
        w.g.push(table.at(i.abs_diff(k), 0));
        w.sigma_g.push(distributed_coeff(table, i, j, k));
    }
    Ok(w)
}

/// Film change at `(i, j)` caused by a unit distributed change centred at `(k, j)`.
pub fn distributed_coeff(table: &KernelTable, i: usize, j: usize, k: usize) -> f64 {
    let l = table.level;
    let mut c = table.at(i.abs_diff(k), 0);
    let neighbours = [(k as isize - 1, j as isize), (k as isize + 1, j as isize), (k as isize, j as isize - 1), (k as isize, j as isize + 1)];
    for (ni, nj) in neighbours {
        if ni >= 1 && nj >= 1 && (ni as usize) < l.nx - 1 && (nj as usize) < l.ny - 1 {
            c -= 0.25 * table.get(i as isize - ni, j as isize - nj);
        }
    }
    c
}
