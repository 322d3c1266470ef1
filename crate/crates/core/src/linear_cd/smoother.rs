use super::operator::CdOperator;
use super::SplittingKind;
use crate::banded::{solve_banded, LineSystem};
use crate::error::Result;
use crate::grid::Field;

/// Pentadiagonal in-line matrix of the distributive splitting: the implicit
/// part (in-line convection plus the whole five-point diffusion) composed
/// with the distribution `δ = σ − ¼ Σ σ_nbr`, restricted to `dy = 0`.
pub fn line_matrix_ls3(op: &CdOperator) -> [f64; 5] {
    let (b, d) = (op.beta(), op.alpha1());
    let w = op.implicit_weight(SplittingKind::Ls3);
    // implicit stencil, c[dy+1][dx+1]
    let mut imp = [[0.0; 3]; 3];
    imp[1][0] = -d - w * b;
    imp[1][1] = 4.0 * d + w * b;
    imp[1][2] = -d;
    imp[0][1] = -d;
    imp[2][1] = -d;
    let dist = [(0isize, 0isize, 1.0), (-1, 0, -0.25), (1, 0, -0.25), (0, -1, -0.25), (0, 1, -0.25)];
    let mut out = [0.0; 5];
    for (ay, row) in imp.iter().enumerate() {
        for (ax, &c) in row.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for &(dx, dy, wd) in &dist {
                let (ox, oy) = (ax as isize - 1 + dx, ay as isize - 1 + dy);
                if oy == 0 {
                    out[(ox + 2) as usize] += c * wd;
                }
            }
        }
    }
    out
}

fn solve_line(bands: [f64; 5], rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut sys = LineSystem::zeros(n);
    for (i, row) in sys.bands.iter_mut().enumerate() {
        *row = bands;
        if i < 2 {
            row[0] = 0.0;
        }
        if i < 1 {
            row[1] = 0.0;
        }
    }
    sys.rhs = rhs;
    solve_banded(&sys)
}

/// One forward x-line sweep. Returns `‖σ‖∞`.
pub fn sweep(op: &CdOperator, kind: SplittingKind, u: &mut Field, f: &Field, ghost: &[f64], omega: f64) -> Result<f64> {
    let l = u.level;
    let (nx, ny) = (l.nx, l.ny);
    let mut change = 0.0f64;
    match kind {
        SplittingKind::Ls3 => {
            let bands = line_matrix_ls3(op);
            let r = op.residual(u, f, ghost);
            let mut sigma = Field::zeros(l);
            for j in 1..ny - 1 {
                let rhs = (1..nx - 1).map(|i| r.get(i, j)).collect();
                let s = solve_line(bands, rhs)?;
                for (k, v) in s.into_iter().enumerate() {
                    sigma.set(k + 1, j, v);
                    change = change.max(v.abs());
                }
            }
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    let nb = sigma.get(i - 1, j) + sigma.get(i + 1, j) + sigma.get(i, j - 1) + sigma.get(i, j + 1);
                    u.add(i, j, omega * (sigma.get(i, j) - 0.25 * nb));
                }
            }
        }
        _ => {
            let z = op.split(kind).zero.c[1];
            let bands = [0.0, z[1], z[2], z[3], 0.0];
            for j in 1..ny - 1 {
                let rhs = (1..nx - 1).map(|i| f.get(i, j) - op.apply_at(u, ghost, i, j)).collect();
                let s = solve_line(bands, rhs)?;
                for (k, v) in s.into_iter().enumerate() {
                    u.add(k + 1, j, omega * v);
                    change = change.max(v.abs());
                }
            }
        }
    }
    Ok(change)
}
