//! Pentadiagonal line systems solved by banded elimination without pivoting.

use crate::error::{Error, Result};

/// Row `i` reads `Σ_k bands[i][k] * sigma[i + k - 2] = rhs[i]`; entries that
/// would reach outside the line are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSystem {
    pub bands: Vec<[f64; 5]>,
    pub rhs: Vec<f64>,
}

impl LineSystem {
    pub fn zeros(n: usize) -> Self {
        Self { bands: vec![[0.0; 5]; n], rhs: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for (k, c) in self.bands[i].iter().enumerate() {
                    let col = i as isize + k as isize - 2;
                    if col >= 0 && (col as usize) < n {
                        s += c * x[col as usize];
                    }
                }
                s
            })
            .collect()
    }
}

pub fn solve_banded(system: &LineSystem) -> Result<Vec<f64>> {
    let n = system.len();
    let mut a = system.bands.clone();
    let mut b = system.rhs.clone();
    // a[i][2 + c - i] holds column c of row i.
    for k in 0..n {
        let piv = a[k][2];
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::SingularLine { row: k });
        }
        for r in (k + 1)..(k + 3).min(n) {
            let off = 2 + k - r;
            let f = a[r][off] / piv;
            if f == 0.0 {
                continue;
            }
            a[r][off] = 0.0;
            for c in (k + 1)..(k + 3).min(n) {
                a[r][2 + c - r] -= f * a[k][2 + c - k];
            }
            b[r] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in (k + 1)..(k + 3).min(n) {
            s -= a[k][2 + c - k] * x[c];
        }
        x[k] = s / a[k][2];
    }
    Ok(x)
}
