use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvd_ehl::banded::{solve_banded, LineSystem};
use tvd_ehl::grid::*;
use tvd_ehl::Error;

fn level(n: usize) -> GridLevel {
    GridLevel::new([-1.0, -1.0, 1.0, 1.0], n, n).unwrap()
}

#[test]
fn hierarchy_sizes() {
    let h = make_hierarchy([-2.5, -2.5, 2.5, 2.5], 33, 6).unwrap();
    assert_eq!(h.finest().nx, 1025);
    assert_eq!(h.coarsest().nx, 33);
    let one = make_hierarchy([-2.5, -2.5, 2.5, 2.5], 33, 1).unwrap();
    assert_eq!(one.len(), 1);
    let h = make_hierarchy([-1.0, -1.0, 1.0, 1.0], 17, 3).unwrap();
    let hs: Vec<f64> = h.levels.iter().map(|l| l.hx).collect();
    assert_eq!(hs, vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0]);
    for w in h.levels.windows(2) {
        assert!(w[1].is_child_of(&w[0]));
    }
}

#[test]
fn hierarchy_rejects_bad_sizes() {
    assert!(matches!(make_hierarchy([0.0, 0.0, 1.0, 1.0], 2, 3), Err(Error::InvalidInput(_))));
    assert!(make_hierarchy([0.0, 0.0, 1.0, 1.0], 5, 0).is_err());
    assert!(GridLevel::new([1.0, 0.0, 0.0, 1.0], 5, 5).is_err());
}

#[test]
fn full_weighting_cases() {
    let f = Field::constant(level(9), 1.0);
    let c = restrict_full_weighting(&f).unwrap();
    assert!(c.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));

    let mut d = Field::zeros(level(9));
    d.set(4, 4, 1.0);
    let c = restrict_full_weighting(&d).unwrap();
    assert_eq!(c.get(2, 2), 0.25);
    d = Field::zeros(level(9));
    d.set(3, 4, 1.0);
    assert_eq!(restrict_full_weighting(&d).unwrap().get(2, 2), 0.125);
    d = Field::zeros(level(9));
    d.set(3, 3, 1.0);
    assert_eq!(restrict_full_weighting(&d).unwrap().get(2, 2), 0.0625);

    let b = Field::from_fn(level(9), |x, y| x + 2.0 * y);
    let c = restrict_full_weighting(&b).unwrap();
    let l = c.level;
    for j in 0..l.ny {
        for i in 0..l.nx {
            assert!((c.get(i, j) - (l.x(i) + 2.0 * l.y(j))).abs() < 1e-14);
        }
    }
    assert!(restrict_full_weighting(&Field::zeros(level(4))).is_err());
}

#[test]
fn injection_cases() {
    let f = Field::from_fn(level(9), |x, y| x * x - y);
    let c = restrict_injection(&f).unwrap();
    for j in 0..5 {
        for i in 0..5 {
            assert_eq!(c.get(i, j), f.get(2 * i, 2 * j));
        }
    }
    let mut d = Field::zeros(level(9));
    d.set(3, 4, 1.0);
    assert_eq!(restrict_injection(&d).unwrap().max_abs(), 0.0);
}

#[test]
fn bilinear_cases() {
    let c = Field::constant(level(5), 1.0);
    let fine = level(9);
    let p = prolong_bilinear(&c, &Field::constant(fine, 1.0)).unwrap();
    assert!(p.values.iter().all(|&v| v == 1.0));
    let p = prolong_bilinear(&c, &Field::zeros(fine)).unwrap();
    assert_eq!(p.max_abs(), 0.0);

    let mut d = Field::zeros(level(5));
    d.set(2, 2, 1.0);
    let p = prolong_bilinear(&d, &Field::constant(fine, 1.0)).unwrap();
    assert_eq!(p.get(4, 4), 1.0);
    assert_eq!(p.get(5, 4), 0.5);
    assert_eq!(p.get(4, 3), 0.5);
    assert_eq!(p.get(5, 5), 0.25);
    assert_eq!(p.get(3, 3), 0.25);
    assert_eq!(p.get(6, 4), 0.0);
    let total: f64 = p.values.iter().sum();
    assert_eq!(total, 4.0);

    assert!(matches!(prolong_bilinear(&d, &Field::zeros(level(11))), Err(Error::LevelMismatch(_))));
}

#[test]
fn error_norm_cases() {
    let c = Field::from_fn(level(5), |x, y| x * y);
    let f = Field::from_fn(level(9), |x, y| x * y);
    let n = error_norms(&c, &f).unwrap();
    assert_eq!((n.l1, n.l2, n.linf), (0.0, 0.0, 0.0));

    // 3×3 coarse grid on [−1,1]², H = 1: one interior point.
    let c = Field::constant(level(3), 1e-3);
    let f = Field::zeros(level(5));
    let n = error_norms(&c, &f).unwrap();
    assert!((n.linf - 1e-3).abs() < 1e-18);
    assert!((n.l2 - 1e-3).abs() < 1e-18);
    assert!((n.l1 - 1e-3).abs() < 1e-18);

    // 5×5 coarse grid, H = 1/2: nine interior points.
    let c = Field::constant(level(5), 1e-3);
    let n = error_norms(&c, &Field::zeros(level(9))).unwrap();
    assert!((n.l2 - (0.25f64 * 9.0 * 1e-6).sqrt()).abs() < 1e-15);
    assert!((n.l1 - 0.25 * 9.0 * 1e-3).abs() < 1e-15);

    assert!(error_norms(&c, &Field::zeros(level(11))).is_err());
}

#[test]
fn order_cases() {
    assert_eq!(convergence_order(4e-2, 1e-2), Some(2.0));
    assert_eq!(convergence_order(0.3, 0.3), Some(0.0));
    let p = convergence_order(2.25624e-03, 3.57540e-04).unwrap();
    assert!((p - 2.6577).abs() < 1e-4, "{p}");
    assert_eq!(convergence_order(0.0, 1.0), None);
    assert_eq!(convergence_order(1.0, -1.0), None);
}

fn dense_solve(sys: &LineSystem) -> Vec<f64> {
    let n = sys.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for k in 0..5 {
            let c = i as isize + k as isize - 2;
            if c >= 0 && (c as usize) < n {
                a[i][c as usize] = sys.bands[i][k];
            }
        }
        a[i][n] = sys.rhs[i];
    }
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().partial_cmp(&a[y][k].abs()).unwrap()).unwrap();
        a.swap(k, p);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            for c in k..=n {
                a[r][c] -= f * a[k][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (a[k][n] - s) / a[k][k];
    }
    x
}

#[test]
fn banded_identity_and_tridiagonal() {
    let mut s = LineSystem::zeros(6);
    for (i, b) in s.bands.iter_mut().enumerate() {
        *b = [0.0, 0.0, 1.0, 0.0, 0.0];
        s.rhs[i] = i as f64 - 2.5;
    }
    assert_eq!(solve_banded(&s).unwrap(), s.rhs);

    let want: Vec<f64> = (0..20).map(|i| (i as f64 * 0.7).sin()).collect();
    let mut s = LineSystem::zeros(20);
    for b in s.bands.iter_mut() {
        *b = [0.0, -1.0, 2.0, -1.0, 0.0];
    }
    s.rhs = s.apply(&want);
    let got = solve_banded(&s).unwrap();
    let res = s.apply(&got).iter().zip(&s.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(res <= 1e-12);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10);
    }
}

#[test]
fn banded_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut s = LineSystem::zeros(64);
    for i in 0..64 {
        let mut off = 0.0;
        for k in [0, 1, 3, 4] {
            s.bands[i][k] = rng.gen_range(-1.0..1.0);
            off += f64::abs(s.bands[i][k]);
        }
        s.bands[i][2] = off + rng.gen_range(0.5..1.5);
        s.rhs[i] = rng.gen_range(-1.0..1.0);
    }
    let got = solve_banded(&s).unwrap();
    let want = dense_solve(&s);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-10);
    }
}

#[test]
fn banded_zero_pivot() {
    let mut s = LineSystem::zeros(3);
    s.bands[1] = [0.0, 0.0, 0.0, 1.0, 0.0];
    s.bands[0] = [0.0, 0.0, 1.0, 0.0, 0.0];
    s.bands[2] = [0.0, 0.0, 1.0, 0.0, 0.0];
    assert!(matches!(solve_banded(&s), Err(Error::SingularLine { row: 1 })));
}

proptest! {
    #[test]
    fn banded_residual_small(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = LineSystem::zeros(n);
        for i in 0..n {
            let mut off = 0.0;
            for k in [0, 1, 3, 4] {
                s.bands[i][k] = rng.gen_range(-1.0..1.0);
                off += f64::abs(s.bands[i][k]);
            }
            s.bands[i][2] = (off + 0.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s.rhs[i] = rng.gen_range(-1.0..1.0);
        }
        let x = solve_banded(&s).unwrap();
        let rn = s.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let res = s.apply(&x).iter().zip(&s.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(res <= 1e-12 * rn.max(1e-300) * 10.0);
    }

    #[test]
    fn injection_inverts_prolongation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Field::zeros(level(5));
        c.values.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        let p = prolong_full(&c);
        prop_assert_eq!(restrict_injection(&p).unwrap(), c);
    }

    #[test]
    fn full_weighting_of_prolonged_bilinear(a in -2.0..2.0f64, b in -2.0..2.0f64, k in -2.0..2.0f64) {
        let c = Field::from_fn(level(5), |x, y| a * x + b * y + k);
        let back = restrict_full_weighting(&prolong_full(&c)).unwrap();
        for (u, v) in back.values.iter().zip(&c.values) {
            prop_assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn injection_keeps_sign(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Field::zeros(level(9));
        f.values.iter_mut().for_each(|v| *v = rng.gen_range(0.0..1.0));
        prop_assert!(restrict_injection(&f).unwrap().min() >= 0.0);
    }

    #[test]
    fn norms_zero_iff_coincident(seed in any::<u64>(), bump in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Field::zeros(level(9));
        f.values.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        let c = restrict_injection(&f).unwrap();
        let n = error_norms(&c, &f).unwrap();
        prop_assert_eq!(n.linf, 0.0);
        let mut c2 = c.clone();
        let (i, j) = (1 + bump % 3, 1 + bump / 3);
        c2.add(i, j, 1e-3);
        prop_assert!(error_norms(&c2, &f).unwrap().linf > 0.0);
    }
}
