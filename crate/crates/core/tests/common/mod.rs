use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for m in 2..=n {
                    let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite tensor quadrature of 2/(π² r) over the cell centred at (dx, dy).
pub fn quad_oracle(dx: f64, dy: f64, h: f64) -> f64 {
    if dx == 0.0 && dy == 0.0 {
        // Polar form over the eight triangles of the square.
        return 2.0 / (PI * PI) * 4.0 * h * (1.0f64 + 2f64.sqrt()).ln();
    }
    let gl = gauss_legendre(12);
    let sub = 24;
    let s = h / sub as f64;
    let mut total = 0.0;
    for a in 0..sub {
        for b in 0..sub {
            let cx = dx - 0.5 * h + (a as f64 + 0.5) * s;
            let cy = dy - 0.5 * h + (b as f64 + 0.5) * s;
            for &(xa, wa) in &gl {
                for &(xb, wb) in &gl {
                    let x = cx + 0.5 * s * xa;
                    let y = cy + 0.5 * s * xb;
                    total += wa * wb * 0.25 * s * s / (x * x + y * y).sqrt();
                }
            }
        }
    }
    2.0 / (PI * PI) * total
}
