//! Vertex-centred uniform grids, grid functions and the transfers between
//! neighbouring levels.
//!
//! Values are stored row-major with `j` as the outer index, so point `(i, j)`
//! lives at `j * nx + i`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLevel {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl GridLevel {
    pub fn new(bounds: [f64; 4], nx: usize, ny: usize) -> Result<Self> {
        let [x0, y0, x1, y1] = bounds;
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidInput(format!("grid needs at least 3 points per axis, got {nx}x{ny}")));
        }
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::InvalidInput("empty domain".into()));
        }
        Ok(Self {
            nx,
            ny,
            hx: (x1 - x0) / (nx - 1) as f64,
            hy: (y1 - y0) / (ny - 1) as f64,
            x0,
            y0,
            x1,
            y1,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Next coarser level, if both axes have an even number of cells.
    pub fn coarser(&self) -> Option<GridLevel> {
        if (self.nx - 1) % 2 != 0 || (self.ny - 1) % 2 != 0 {
            return None;
        }
        let (cx, cy) = ((self.nx - 1) / 2 + 1, (self.ny - 1) / 2 + 1);
        if cx < 3 || cy < 3 {
            return None;
        }
        GridLevel::new(self.bounds(), cx, cy).ok()
    }

    pub fn finer(&self) -> GridLevel {
        GridLevel::new(self.bounds(), 2 * (self.nx - 1) + 1, 2 * (self.ny - 1) + 1)
            .expect("refinement of a valid level is valid")
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.x0, self.y0, self.x1, self.y1]
    }

    pub fn is_child_of(&self, coarse: &GridLevel) -> bool {
        self.nx == 2 * (coarse.nx - 1) + 1 && self.ny == 2 * (coarse.ny - 1) + 1 && self.bounds() == coarse.bounds()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridHierarchy {
    /// Coarsest first.
    pub levels: Vec<GridLevel>,
}

impl GridHierarchy {
    pub fn finest(&self) -> &GridLevel {
        self.levels.last().expect("hierarchy is never empty")
    }

    pub fn coarsest(&self) -> &GridLevel {
        &self.levels[0]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

pub fn make_hierarchy(bounds: [f64; 4], coarsest_n: usize, levels: usize) -> Result<GridHierarchy> {
    if coarsest_n < 3 || levels < 1 {
        return Err(Error::InvalidInput(format!("coarsest_n = {coarsest_n}, levels = {levels}")));
    }
    let mut out = vec![GridLevel::new(bounds, coarsest_n, coarsest_n)?];
    for _ in 1..levels {
        let next = out.last().unwrap().finer();
        out.push(next);
    }
    Ok(GridHierarchy { levels: out })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub level: GridLevel,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(level: GridLevel) -> Self {
        Self::constant(level, 0.0)
    }

    pub fn constant(level: GridLevel, c: f64) -> Self {
        Self { level, values: vec![c; level.len()] }
    }

    pub fn from_fn(level: GridLevel, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(level.len());
        for j in 0..level.ny {
            for i in 0..level.nx {
                values.push(f(level.x(i), level.y(j)));
            }
        }
        Self { level, values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.level.nx + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let nx = self.level.nx;
        self.values[j * nx + i] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let nx = self.level.nx;
        self.values[j * nx + i] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// L∞ over interior points only.
    pub fn interior_max_abs(&self) -> f64 {
        let l = self.level;
        let mut m: f64 = 0.0;
        for j in 1..l.ny - 1 {
            for i in 1..l.nx - 1 {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    pub fn interior_sum(&self) -> f64 {
        let l = self.level;
        let mut s = 0.0;
        for j in 1..l.ny - 1 {
            for i in 1..l.nx - 1 {
                s += self.get(i, j);
            }
        }
        s
    }
}

fn coarse_of(fine: &Field) -> Result<GridLevel> {
    fine.level
        .coarser()
        .ok_or_else(|| Error::InvalidInput(format!("{}x{} grid has no coarser parent", fine.level.nx, fine.level.ny)))
}

/// Nine-point full weighting at interior coarse points, injection on the boundary.
pub fn restrict_full_weighting(fine: &Field) -> Result<Field> {
    let cl = coarse_of(fine)?;
    let mut out = restrict_injection(fine)?;
    for jc in 1..cl.ny - 1 {
        for ic in 1..cl.nx - 1 {
            let (i, j) = (2 * ic, 2 * jc);
            let v = 0.25 * fine.get(i, j)
                + 0.125 * (fine.get(i - 1, j) + fine.get(i + 1, j) + fine.get(i, j - 1) + fine.get(i, j + 1))
                + 0.0625
                    * (fine.get(i - 1, j - 1) + fine.get(i + 1, j - 1) + fine.get(i - 1, j + 1) + fine.get(i + 1, j + 1));
            out.set(ic, jc, v);
        }
    }
    Ok(out)
}

pub fn restrict_injection(fine: &Field) -> Result<Field> {
    let cl = coarse_of(fine)?;
    let mut out = Field::zeros(cl);
    for jc in 0..cl.ny {
        for ic in 0..cl.nx {
            out.set(ic, jc, fine.get(2 * ic, 2 * jc));
        }
    }
    Ok(out)
}

/// Bilinear interpolation of a coarse correction onto the child grid. Points
/// where `inactive` is zero receive no correction.
pub fn prolong_bilinear(coarse: &Field, inactive: &Field) -> Result<Field> {
    let fl = inactive.level;
    if !fl.is_child_of(&coarse.level) {
        return Err(Error::LevelMismatch(format!(
            "mask {}x{} is not the child of {}x{}",
            fl.nx, fl.ny, coarse.level.nx, coarse.level.ny
        )));
    }
    let mut out = Field::zeros(fl);
    for j in 0..fl.ny {
        let (jc, ty) = (j / 2, j % 2);
        for i in 0..fl.nx {
            if inactive.get(i, j) == 0.0 {
                continue;
            }
            let (ic, tx) = (i / 2, i % 2);
            let v = match (tx, ty) {
                (0, 0) => coarse.get(ic, jc),
                (1, 0) => 0.5 * (coarse.get(ic, jc) + coarse.get(ic + 1, jc)),
                (0, 1) => 0.5 * (coarse.get(ic, jc) + coarse.get(ic, jc + 1)),
                _ => {
                    0.25 * (coarse.get(ic, jc)
                        + coarse.get(ic + 1, jc)
                        + coarse.get(ic, jc + 1)
                        + coarse.get(ic + 1, jc + 1))
                }
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Bilinear interpolation without masking.
pub fn prolong_full(coarse: &Field) -> Field {
    let mask = Field::constant(coarse.level.finer(), 1.0);
    prolong_bilinear(coarse, &mask).expect("finer level of coarse is its child")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Successive-grid difference between a coarse solution and the injected
/// fine solution, over interior coarse points.
pub fn error_norms(coarse_solution: &Field, fine_solution: &Field) -> Result<ErrorNorms> {
    let cl = coarse_solution.level;
    if !fine_solution.level.is_child_of(&cl) {
        return Err(Error::LevelMismatch("fine solution is not the child of the coarse solution".into()));
    }
    let area = cl.hx * cl.hy;
    let (mut s1, mut s2, mut m) = (0.0, 0.0, 0.0f64);
    for j in 1..cl.ny - 1 {
        for i in 1..cl.nx - 1 {
            let d = (coarse_solution.get(i, j) - fine_solution.get(2 * i, 2 * j)).abs();
            s1 += d;
            s2 += d * d;
            m = m.max(d);
        }
    }
    Ok(ErrorNorms { l1: area * s1, l2: (area * s2).sqrt(), linf: m })
}

/// Observed order between two successive errors; `None` when either is not positive.
pub fn convergence_order(err_prev: f64, err_next: f64) -> Option<f64> {
    if err_prev > 0.0 && err_next > 0.0 && err_prev.is_finite() && err_next.is_finite() {
        Some((err_prev / err_next).log2())
    } else {
        None
    }
}
