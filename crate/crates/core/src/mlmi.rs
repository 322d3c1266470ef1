//! Multilevel multi-integration of the deformation sum.
//!
//! Each coarsening step interpolates the kernel in both the source and the
//! target variable with order-`2p` Lagrange interpolation and corrects the
//! result near the singularity. Coarse index `J` sits on fine index `2J`;
//! every level is padded so that interpolation stencils never need to be
//! shifted at the edges (density outside the physical grid is zero).

use crate::error::{Error, Result};
use crate::grid::{Field, GridLevel};
use crate::kernel::KernelTable;

/// Grid function on an index box `lo..lo+n` (per axis), possibly extending
/// beyond the physical grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub lo: [isize; 2],
    pub n: [usize; 2],
    pub values: Vec<f64>,
}

impl Patch {
    pub fn zeros(lo: [isize; 2], n: [usize; 2]) -> Self {
        Self { lo, n, values: vec![0.0; n[0] * n[1]] }
    }

    #[inline]
    pub fn get(&self, ix: isize, iy: isize) -> f64 {
        let (a, b) = (ix - self.lo[0], iy - self.lo[1]);
        if a < 0 || b < 0 || a as usize >= self.n[0] || b as usize >= self.n[1] {
            return 0.0;
        }
        self.values[a as usize + self.n[0] * b as usize]
    }

    #[inline]
    fn slot(&self, ix: isize, iy: isize) -> usize {
        (ix - self.lo[0]) as usize + self.n[0] * (iy - self.lo[1]) as usize
    }

    pub fn hi(&self, axis: usize) -> isize {
        self.lo[axis] + self.n[axis] as isize - 1
    }

    fn from_field(u: &Field) -> Self {
        Self { lo: [0, 0], n: [u.level.nx, u.level.ny], values: u.values.clone() }
    }
}

/// Lagrange weights for the midpoint between coarse nodes 0 and 1, using
/// nodes `-p+1 ..= p`.
pub fn midpoint_weights(order_2p: usize) -> Vec<f64> {
    let p = (order_2p / 2) as isize;
    let nodes: Vec<f64> = (-p + 1..=p).map(|t| t as f64).collect();
    nodes
        .iter()
        .enumerate()
        .map(|(k, &tk)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, &tl)| (0.5 - tl) / (tk - tl))
                .product()
        })
        .collect()
}

fn coarse_range(lo: isize, hi: isize, p: isize) -> (isize, isize) {
    (lo.div_euclid(2) - (p - 1), (hi + 1).div_euclid(2) + (p - 1))
}

/// 1-D stencil `(first coarse index, weights)` of fine index `f`.
#[inline]
fn stencil(f: isize, p: isize) -> Option<isize> {
    if f.rem_euclid(2) == 0 {
        None
    } else {
        Some(f.div_euclid(2) - p + 1)
    }
}

/// Adjoint of order-`2p` interpolation, without the `2^{-d}` scale.
fn adjoint_interp(fine: &Patch, w: &[f64]) -> Patch {
    let p = (w.len() / 2) as isize;
    let (cx0, cx1) = coarse_range(fine.lo[0], fine.hi(0), p);
    let (cy0, cy1) = coarse_range(fine.lo[1], fine.hi(1), p);
    // along x
    let mut tmp = Patch::zeros([cx0, fine.lo[1]], [(cx1 - cx0 + 1) as usize, fine.n[1]]);
    for iy in fine.lo[1]..=fine.hi(1) {
        for ix in fine.lo[0]..=fine.hi(0) {
            let v = fine.get(ix, iy);
            if v == 0.0 {
                continue;
            }
            match stencil(ix, p) {
                None => {
                    let s = tmp.slot(ix / 2, iy);
                    tmp.values[s] += v;
                }
                Some(c0) => {
                    for (k, wk) in w.iter().enumerate() {
                        let s = tmp.slot(c0 + k as isize, iy);
                        tmp.values[s] += wk * v;
                    }
                }
            }
        }
    }
    let mut out = Patch::zeros([cx0, cy0], [(cx1 - cx0 + 1) as usize, (cy1 - cy0 + 1) as usize]);
    for iy in tmp.lo[1]..=tmp.hi(1) {
        for ix in tmp.lo[0]..=tmp.hi(0) {
            let v = tmp.get(ix, iy);
            if v == 0.0 {
                continue;
            }
            match stencil(iy, p) {
                None => {
                    let s = out.slot(ix, iy / 2);
                    out.values[s] += v;
                }
                Some(c0) => {
                    for (k, wk) in w.iter().enumerate() {
                        let s = out.slot(ix, c0 + k as isize);
                        out.values[s] += wk * v;
                    }
                }
            }
        }
    }
    out
}

/// Order-`2p` interpolation of `coarse` onto the fine box `lo..lo+n`.
fn interpolate(coarse: &Patch, lo: [isize; 2], n: [usize; 2], w: &[f64]) -> Patch {
    let p = (w.len() / 2) as isize;
    let mut tmp = Patch::zeros([lo[0], coarse.lo[1]], [n[0], coarse.n[1]]);
    for iy in coarse.lo[1]..=coarse.hi(1) {
        for ix in lo[0]..lo[0] + n[0] as isize {
            let v = match stencil(ix, p) {
                None => coarse.get(ix.div_euclid(2), iy),
                Some(c0) => w.iter().enumerate().map(|(k, wk)| wk * coarse.get(c0 + k as isize, iy)).sum(),
            };
            let s = tmp.slot(ix, iy);
            tmp.values[s] = v;
        }
    }
    let mut out = Patch::zeros(lo, n);
    for iy in lo[1]..lo[1] + n[1] as isize {
        for ix in lo[0]..lo[0] + n[0] as isize {
            let v = match stencil(iy, p) {
                None => tmp.get(ix, iy.div_euclid(2)),
                Some(c0) => w.iter().enumerate().map(|(k, wk)| wk * tmp.get(ix, c0 + k as isize)).sum(),
            };
            let s = out.slot(ix, iy);
            out.values[s] = v;
        }
    }
    out
}

/// Density coarsening `u*ᴴ = 2^{-d} Iᵀ u*ʰ` of a physical grid function.
pub fn coarsen_density(u: &Field, order_2p: usize) -> Result<Patch> {
    check_order(order_2p)?;
    let mut out = adjoint_interp(&Patch::from_field(u), &midpoint_weights(order_2p));
    out.values.iter_mut().for_each(|v| *v *= 0.25);
    Ok(out)
}

/// Pure index subsampling `g^{HH}[I][J] = g^{hh}[2I][2J]`.
pub fn inject_kernel(table: &KernelTable) -> KernelTable {
    let (ni, nj) = ((table.ni + 1) / 2, (table.nj + 1) / 2);
    let mut g = Vec::with_capacity(ni * nj);
    for dj in 0..nj {
        for di in 0..ni {
            g.push(table.at(2 * di, 2 * dj));
        }
    }
    let level = GridLevel { hx: 2.0 * table.level.hx, hy: 2.0 * table.level.hy, ..table.level };
    KernelTable { level, ni, nj, g }
}

fn check_order(order_2p: usize) -> Result<()> {
    if order_2p < 2 || order_2p % 2 != 0 {
        return Err(Error::InvalidInput(format!("interpolation order {order_2p} must be even and >= 2")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Transition {
    /// Source correction by parity class of the source, offsets `-2m..=2m`.
    source: [Vec<f64>; 4],
    /// Target correction by parity class of the target, offsets `-2m..=2m`.
    target: [Vec<f64>; 4],
}

#[derive(Debug, Clone)]
pub struct MlmiPlan {
    pub order_2p: usize,
    pub m: usize,
    pub levels: usize,
    pub grid: GridLevel,
    /// Kernel on each level, in that level's index units.
    pub tables: Vec<KernelTable>,
    boxes: Vec<([isize; 2], [usize; 2])>,
    transitions: Vec<Transition>,
    weights: Vec<f64>,
}

impl MlmiPlan {
    /// `levels = None` coarsens until the padded box is at most `4·order_2p` wide.
    pub fn new(grid: &GridLevel, order_2p: usize, m: usize, levels: Option<usize>) -> Result<Self> {
        check_order(order_2p)?;
        if 2 * m < order_2p {
            return Err(Error::InvalidInput(format!("correction radius {m} below order_2p/2")));
        }
        if ((grid.hx - grid.hy) / grid.hx).abs() > 1e-12 {
            return Err(Error::Unsupported("MLMI needs square cells".into()));
        }
        let p = (order_2p / 2) as isize;
        let mut boxes = vec![([0isize, 0isize], [grid.nx, grid.ny])];
        let target_width = 4 * order_2p;
        loop {
            let (lo, n) = *boxes.last().unwrap();
            let k = boxes.len() - 1;
            let stop = match levels {
                Some(l) => k >= l,
                None => n[0].max(n[1]) <= target_width,
            };
            if stop {
                break;
            }
            let (x0, x1) = coarse_range(lo[0], lo[0] + n[0] as isize - 1, p);
            let (y0, y1) = coarse_range(lo[1], lo[1] + n[1] as isize - 1, p);
            let nn = [(x1 - x0 + 1) as usize, (y1 - y0 + 1) as usize];
            if nn[0] < order_2p + 3 || nn[1] < order_2p + 3 || (levels.is_none() && nn[0] >= n[0]) {
                if levels.is_some() {
                    return Err(Error::InvalidInput(format!("grid too small for {} MLMI levels", levels.unwrap())));
                }
                break;
            }
            boxes.push(([x0, y0], nn));
        }
        let nlev = boxes.len() - 1;
        let reach = 2 * m + order_2p + 2;
        let ext = |k: usize| {
            let (_, n) = boxes[k];
            (n[0].max(reach + 1), n[1].max(reach + 1))
        };
        let mut need = (0usize, 0usize);
        for k in 0..=nlev {
            let (a, b) = ext(k);
            need.0 = need.0.max(a << k);
            need.1 = need.1.max(b << k);
        }
        let fine = KernelTable::with_extent(*grid, need.0, need.1);
        let mut tables = vec![fine];
        for _ in 0..nlev {
            let next = inject_kernel(tables.last().unwrap());
            tables.push(next);
        }
        let weights = midpoint_weights(order_2p);
        let transitions = (0..nlev).map(|k| build_transition(&tables[k], &weights, m)).collect();
        Ok(Self { order_2p, m, levels: nlev, grid: *grid, tables, boxes, transitions, weights })
    }

    pub fn evaluate(&self, u: &Field) -> Result<Field> {
        if u.level.nx != self.grid.nx || u.level.ny != self.grid.ny {
            return Err(Error::LevelMismatch("field does not match the MLMI plan".into()));
        }
        let w = self.eval_level(0, Patch::from_field(u));
        Ok(Field { level: u.level, values: w.values })
    }

    fn eval_level(&self, k: usize, u: Patch) -> Patch {
        let table = &self.tables[k];
        if k == self.levels {
            return dense(&u, table);
        }
        let (lo, n) = self.boxes[k];
        let uc = adjoint_interp(&u, &self.weights);
        let wc = self.eval_level(k + 1, uc.clone());
        let mut w = interpolate(&wc, lo, n, &self.weights);
        let t = &self.transitions[k];
        let r = 2 * self.m as isize;
        let side = (2 * r + 1) as usize;
        for iy in lo[1]..lo[1] + n[1] as isize {
            for ix in lo[0]..lo[0] + n[0] as isize {
                let mut s = 0.0;
                // target interpolation correction
                let q = (ix.rem_euclid(2) + 2 * iy.rem_euclid(2)) as usize;
                if q != 0 {
                    let ct = &t.target[q];
                    let jx0 = (ix - r + 1).div_euclid(2);
                    let jx1 = (ix + r).div_euclid(2);
                    let jy0 = (iy - r + 1).div_euclid(2);
                    let jy1 = (iy + r).div_euclid(2);
                    for jy in jy0..=jy1 {
                        let ey = iy - 2 * jy;
                        if ey.abs() > r {
                            continue;
                        }
                        for jx in jx0..=jx1 {
                            let ex = ix - 2 * jx;
                            if ex.abs() > r {
                                continue;
                            }
                            let v = uc.get(jx, jy);
                            if v != 0.0 {
                                s += ct[(ex + r) as usize + side * (ey + r) as usize] * v;
                            }
                        }
                    }
                }
                // source interpolation correction
                for jy in iy - r..=iy + r {
                    for jx in ix - r..=ix + r {
                        let pq = (jx.rem_euclid(2) + 2 * jy.rem_euclid(2)) as usize;
                        if pq == 0 {
                            continue;
                        }
                        let v = u.get(jx, jy);
                        if v != 0.0 {
                            s += t.source[pq][(ix - jx + r) as usize + side * (iy - jy + r) as usize] * v;
                        }
                    }
                }
                let sl = w.slot(ix, iy);
                w.values[sl] += s;
            }
        }
        w
    }
}

fn dense(u: &Patch, table: &KernelTable) -> Patch {
    let mut out = Patch::zeros(u.lo, u.n);
    let src: Vec<(usize, usize, f64)> = (0..u.n[1])
        .flat_map(|b| (0..u.n[0]).map(move |a| (a, b)))
        .filter_map(|(a, b)| {
            let v = u.values[a + u.n[0] * b];
            (v != 0.0).then_some((a, b, v))
        })
        .collect();
    for b in 0..u.n[1] {
        for a in 0..u.n[0] {
            out.values[a + u.n[0] * b] = src.iter().map(|&(c, d, v)| table.at(a.abs_diff(c), b.abs_diff(d)) * v).sum();
        }
    }
    out
}

fn build_transition(table: &KernelTable, w: &[f64], m: usize) -> Transition {
    let p = (w.len() / 2) as isize;
    let r = 2 * m as isize;
    let k = |a: isize, b: isize| table.get(a, b);
    // 1-D stencil (offset, weight) for parity 0 and 1.
    let st = |par: isize| -> Vec<(isize, f64)> {
        if par == 0 {
            vec![(0, 1.0)]
        } else {
            w.iter().enumerate().map(|(i, &wi)| (i as isize - p + 1, wi)).collect()
        }
    };
    let mut source: [Vec<f64>; 4] = Default::default();
    let mut target: [Vec<f64>; 4] = Default::default();
    for cls in 0..4 {
        let (px, py) = ((cls % 2) as isize, (cls / 2) as isize);
        let (sx, sy) = (st(px), st(py));
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for dy in -r..=r {
            for dx in -r..=r {
                // source j = 2J0 + p: Σ_J I_{jJ} k(i - 2J) with i - j = d
                let mut approx = 0.0;
                for &(tx, wx) in &sx {
                    for &(ty, wy) in &sy {
                        approx += wx * wy * k(dx + px - 2 * tx, dy + py - 2 * ty);
                    }
                }
                src.push(if cls == 0 { 0.0 } else { k(dx, dy) - approx });
                // target i = 2I0 + q, e = i - 2J: Σ_I Î_{iI} k(2I - 2J)
                let mut approx_t = 0.0;
                for &(tx, wx) in &sx {
                    for &(ty, wy) in &sy {
                        approx_t += wx * wy * k(dx - px + 2 * tx, dy - py + 2 * ty);
                    }
                }
                tgt.push(if cls == 0 { 0.0 } else { k(dx, dy) - approx_t });
            }
        }
        source[cls] = src;
        target[cls] = tgt;
    }
    Transition { source, target }
}

/// Deformation `Σ G u` evaluated with `plan`.
pub fn mlmi_deformation(u: &Field, plan: &MlmiPlan) -> Result<Field> {
    plan.evaluate(u)
}
