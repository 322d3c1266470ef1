use super::SplittingKind;
use crate::grid::{Field, GridLevel};

/// Constant-coefficient operator: convection `(a/h) Σ conv[k] u_{i+k−2}` for
/// offsets −2..=1 plus the five-point diffusion `ε/h² [4, −1, −1, −1, −1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdOperator {
    pub a: f64,
    pub eps: f64,
    pub h: f64,
    /// `None` for the first-order upwind operator.
    pub kappa: Option<f64>,
    pub conv: [f64; 4],
}

impl CdOperator {
    pub fn kappa(a: f64, eps: f64, h: f64, kappa: f64) -> Self {
        let conv = [(1.0 - kappa) / 4.0, -(5.0 - 3.0 * kappa) / 4.0, (3.0 - 3.0 * kappa) / 4.0, (1.0 + kappa) / 4.0];
        Self { a, eps, h, kappa: Some(kappa), conv }
    }

    pub fn first_order(a: f64, eps: f64, h: f64) -> Self {
        Self { a, eps, h, kappa: None, conv: [0.0, -1.0, 1.0, 0.0] }
    }

    pub fn coarser(&self) -> Self {
        Self { h: 2.0 * self.h, ..*self }
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.a / self.h
    }

    #[inline]
    pub fn alpha1(&self) -> f64 {
        self.eps / (self.h * self.h)
    }

    /// Full stencil as `c[dy+1][dx+2]`.
    pub fn stencil(&self) -> LineStencil {
        let (b, d) = (self.beta(), self.alpha1());
        let mut c = [[0.0; 5]; 3];
        for k in 0..4 {
            c[1][k] = b * self.conv[k];
        }
        c[1][2] += 4.0 * d;
        c[1][1] -= d;
        c[1][3] -= d;
        c[0][2] = -d;
        c[2][2] = -d;
        LineStencil { c }
    }

    /// `(L u)(i, j)`; `ghost[j]` stands in for `u(−1, j)`.
    #[inline]
    pub fn apply_at(&self, u: &Field, ghost: &[f64], i: usize, j: usize) -> f64 {
        let (b, d) = (self.beta(), self.alpha1());
        let umm = if i >= 2 { u.get(i - 2, j) } else { ghost[j] };
        let conv = self.conv[0] * umm + self.conv[1] * u.get(i - 1, j) + self.conv[2] * u.get(i, j) + self.conv[3] * u.get(i + 1, j);
        let diff = 4.0 * u.get(i, j) - u.get(i - 1, j) - u.get(i + 1, j) - u.get(i, j - 1) - u.get(i, j + 1);
        b * conv + d * diff
    }

    /// Interior residual `f − L u`, zero on the boundary.
    pub fn residual(&self, u: &Field, f: &Field, ghost: &[f64]) -> Field {
        let l = u.level;
        let mut r = Field::zeros(l);
        for j in 1..l.ny - 1 {
            for i in 1..l.nx - 1 {
                r.set(i, j, f.get(i, j) - self.apply_at(u, ghost, i, j));
            }
        }
        r
    }

    /// In-line convection weight of `(u_i − u_{i−1})` kept implicit by each
    /// splitting. The first-order operator always keeps all of it.
    pub fn implicit_weight(&self, kind: SplittingKind) -> f64 {
        let Some(kappa) = self.kappa else { return 1.0 };
        match kind {
            SplittingKind::Ls0 => (5.0 - 3.0 * kappa) / 4.0,
            SplittingKind::Ls1 => (2.0 - kappa) / 2.0,
            SplittingKind::Ls2 | SplittingKind::DefectCorrection => 1.0,
            SplittingKind::Ls3 => (2.0 + kappa) / 2.0,
        }
    }

    /// `L = L⁺ + L⁰ + L⁻` for a line splitting. `L⁺` holds the line below,
    /// `L⁰` the implicit in-line part and `L⁻` the rest.
    pub fn split(&self, kind: SplittingKind) -> SplitParts {
        let full = self.stencil();
        let (b, d) = (self.beta(), self.alpha1());
        let w = self.implicit_weight(kind);
        let mut plus = [[0.0; 5]; 3];
        plus[0][2] = full.c[0][2];
        let mut zero = [[0.0; 5]; 3];
        zero[1][1] = -d - w * b;
        zero[1][2] = 4.0 * d + w * b;
        zero[1][3] = -d;
        let mut minus = [[0.0; 5]; 3];
        for r in 0..3 {
            for k in 0..5 {
                minus[r][k] = full.c[r][k] - plus[r][k] - zero[r][k];
            }
        }
        SplitParts { plus: LineStencil { c: plus }, zero: LineStencil { c: zero }, minus: LineStencil { c: minus } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineStencil {
    /// `c[dy+1][dx+2]`.
    pub c: [[f64; 5]; 3],
}

impl LineStencil {
    pub fn row_sum(&self) -> f64 {
        self.c.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParts {
    pub plus: LineStencil,
    pub zero: LineStencil,
    pub minus: LineStencil,
}

/// Per-point κ-scheme stencil (constant over the level).
pub fn assemble_kappa_operator(a: f64, eps: f64, kappa: f64, level: &GridLevel) -> LineStencil {
    CdOperator::kappa(a, eps, level.hx, kappa).stencil()
}
