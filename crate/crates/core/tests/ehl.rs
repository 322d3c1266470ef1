use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvd_ehl::ehl::*;
use tvd_ehl::grid::{Field, GridLevel};
use tvd_ehl::limiter::LimiterSpec;
use tvd_ehl::physics::{resolve_moes, GaugeDefaults};
use tvd_ehl::report::SolveStatus;
use tvd_ehl::Error;

fn config() -> EhlConfig {
    EhlConfig::new(resolve_moes(20.0, 10.0, 1.7e-8, GaugeDefaults::default()).unwrap())
}

fn level(n: usize) -> GridLevel {
    GridLevel::new([-2.5, -2.5, 2.5, 2.5], n, n).unwrap()
}

fn hertz_state(n: usize, cfg: &EhlConfig) -> (LcpLevelState, FilmOperator) {
    let l = level(n);
    let film = FilmOperator::new(&l, false, 6, 4).unwrap();
    let mut st = LcpLevelState::hertzian(l, -0.5);
    film.update(&mut st).unwrap();
    refresh_coefficients(&mut st, &cfg.physics);
    (st, film)
}

#[test]
fn switch_rule() {
    assert_eq!(select_splitting(1.0, 1.0, 1.0, 0.6), LineKind::GaussSeidel);
    assert_eq!(select_splitting(0.1, 1.0, 1.0, 0.6), LineKind::JacobiDistributed);
    assert_eq!(select_splitting(0.6, 1.0, 1.0, 0.6), LineKind::JacobiDistributed);
    assert_eq!(select_splitting(1.0, 0.5, 2.0, 0.6), LineKind::JacobiDistributed);
    assert_eq!(select_splitting(0.0, 0.1, 0.1, 0.6), LineKind::JacobiDistributed);
}

#[test]
fn config_checks() {
    assert!(config().validate().is_ok());
    let mut c = config();
    c.c_h00 = 0.5;
    assert!(matches!(c.validate(), Err(Error::Config(_))));
    let mut c = config();
    c.omega_jac = 0.0;
    assert!(c.validate().is_err());
    let mut c = config();
    c.window_radius = 0;
    assert!(c.validate().is_err());
    assert_eq!(Hybrid::parse("HS2").unwrap(), Hybrid::Hs2);
    assert!(Hybrid::parse("hs3").is_err());
    assert_eq!(config().hierarchy().unwrap().finest().nx, 257);
}

#[test]
fn hertzian_start() {
    let st = LcpLevelState::hertzian(level(33), 0.0);
    assert_eq!(st.u.get(16, 16), 1.0);
    assert_eq!(st.u.get(0, 16), 0.0);
    assert!(st.u.min() >= 0.0);
    // Integral of the hemisphere is 2π/3; the grid sum is close.
    assert!((st.load() - LOAD).abs() / LOAD < 0.02);
    assert!((LOAD - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
}

#[test]
fn face_flux_forms() {
    let q = [1.0, 2.0, 4.0, 7.0];
    let f = face_fluxes(&q, LimiterSpec::KappaFixed(-1.0));
    assert_eq!(f.len(), 3);
    assert_eq!(f[0], 1.0);
    assert_eq!(f[1], 2.0 + 0.5 * 1.0);
    assert_eq!(f[2], 4.0 + 0.5 * 2.0);
    let f = face_fluxes(&[0.0, 0.0, 1.0, 1.0], LimiterSpec::Minmod);
    assert_eq!(f, vec![0.0, 0.0, 1.0]);
}

#[test]
fn residual_on_linear_film() {
    let l = level(17);
    let mut st = LcpLevelState::new(l, Field::zeros(l), 0.0);
    st.h = Field::from_fn(l, |x, _| 3.0 + 0.5 * x);
    st.rho = Field::constant(l, 1.0);
    let r = ehl_residual(&st, LimiterSpec::KappaFixed(1.0 / 3.0));
    for j in 1..16 {
        assert!((r.get(1, j) + 0.75).abs() < 1e-12);
        for i in 2..16 {
            assert!((r.get(i, j) + 0.5).abs() < 1e-12, "{i} {j} {}", r.get(i, j));
        }
        assert_eq!(r.get(0, j), 0.0);
    }
    // The diffusion part is exact on a quadratic.
    st.h = Field::constant(l, 1.0);
    st.eps = Field::constant(l, 0.3);
    st.u = Field::from_fn(l, |x, y| x * x + y * y);
    let r = ehl_residual(&st, LimiterSpec::Koren);
    for j in 1..16 {
        for i in 1..16 {
            assert!((r.get(i, j) - 4.0 * 0.3).abs() < 1e-12);
        }
    }
}

#[test]
fn complementarity_norm_and_restriction() {
    let l = level(5);
    let mut st = LcpLevelState::new(l, Field::zeros(l), 0.0);
    st.u.set(1, 1, 0.5);
    let mut r = Field::zeros(l);
    r.set(1, 1, -0.2);
    r.set(2, 2, -3.0);
    r.set(3, 3, 0.1);
    assert!((lcp_residual_norm(&st, &r) - 0.2).abs() < 1e-15);
    r.set(2, 1, 0.7);
    assert!((lcp_residual_norm(&st, &r) - 0.7).abs() < 1e-15);
    let rr = restricted_residual(&st, &r);
    assert_eq!(rr.get(1, 1), -0.2);
    assert_eq!(rr.get(2, 2), 0.0);
    assert_eq!(rr.get(3, 3), 0.1);
}

#[test]
fn force_balance_direction() {
    let l = level(9);
    let mut st = LcpLevelState::new(l, Field::zeros(l), 0.0);
    update_h00(&mut st, 0.05);
    assert!((st.h00 + 0.05 * LOAD).abs() < 1e-15);
    st.u = Field::constant(l, 10.0);
    let before = st.h00;
    update_h00(&mut st, 0.05);
    assert!(st.h00 > before);
    assert!((st.load() - 0.625 * 0.625 * 810.0).abs() < 1e-9);
}

#[test]
fn cavitated_rows_are_identity() {
    let cfg = config();
    let (mut st, film) = hertz_state(17, &cfg);
    st.u.set(3, 8, 0.0);
    let res = vec![-1.0; 15];
    let set = LineSettings::from_config(&cfg);
    let (sys, kinds) = line_system(&st, &film.table, &set, 8, &res);
    assert_eq!(kinds.len(), 15);
    assert_eq!(sys.bands[2], [0.0, 0.0, 1.0, 0.0, 0.0]);
    assert_eq!(sys.rhs[2], 0.0);
    assert_ne!(sys.bands[7], [0.0, 0.0, 1.0, 0.0, 0.0]);
    assert_eq!(sys.rhs[7], -1.0);
}

#[test]
fn line_system_diffusion_part() {
    let cfg = config();
    let (mut st, film) = hertz_state(17, &cfg);
    st.rho = Field::zeros(st.level);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    st.eps.values.iter_mut().for_each(|v| *v = rng.gen_range(0.5..2.0));
    st.u = Field::constant(st.level, 1.0);
    let (j, h2) = (6, st.level.hx * st.level.hx);
    let res = vec![0.0; 15];
    let e = |i: usize, jj: usize| st.eps.get(i, jj);
    let fm = |a: f64, b: f64| 0.5 * (a + b);
    let stencil = |i: usize, jj: usize| {
        let c = e(i, jj);
        let (xp, xm, yp, ym) = (fm(c, e(i + 1, jj)), fm(c, e(i - 1, jj)), fm(c, e(i, jj + 1)), fm(c, e(i, jj - 1)));
        ((xp + xm + yp + ym) / h2, -xm / h2, -xp / h2, -yp / h2, -ym / h2)
    };

    let mut set = LineSettings::from_config(&cfg);
    set.force = Some(LineKind::GaussSeidel);
    let (sys, _) = line_system(&st, &film.table, &set, j, &res);
    for i in 2..15 {
        let (c, w, ea, _, _) = stencil(i, j);
        let b = sys.bands[i - 1];
        assert!((b[2] - c).abs() < 1e-12 && (b[1] - w).abs() < 1e-12 && (b[3] - ea).abs() < 1e-12);
        assert_eq!((b[0], b[4]), (0.0, 0.0));
    }

    set.force = Some(LineKind::JacobiDistributed);
    let (sys, _) = line_system(&st, &film.table, &set, j, &res);
    let i = 7;
    // Row i, distributed column k: L(δ_k) at i with δ_k = e_k − ¼ Σ e_nbr(k).
    let at = |k: usize| -> f64 {
        let (c, w, ea, n, s) = stencil(i, j);
        let coef = |x: isize, y: isize| -> f64 {
            match (x - i as isize, y - j as isize) {
                (0, 0) => c,
                (-1, 0) => w,
                (1, 0) => ea,
                (0, 1) => n,
                (0, -1) => s,
                _ => 0.0,
            }
        };
        let (k, jj) = (k as isize, j as isize);
        coef(k, jj) - 0.25 * (coef(k - 1, jj) + coef(k + 1, jj) + coef(k, jj - 1) + coef(k, jj + 1))
    };
    for band in 0..5 {
        let k = i + band - 2;
        assert!((sys.bands[i - 1][band] - at(k)).abs() < 1e-12, "band {band}");
    }
}

#[test]
fn relaxation_projects_onto_obstacle() {
    let cfg = config();
    let (mut st, film) = hertz_state(17, &cfg);
    for kind in [None, Some(LineKind::GaussSeidel), Some(LineKind::JacobiDistributed)] {
        for _ in 0..5 {
            let ch = relax_sweep(&mut st, &film, &cfg, kind).unwrap();
            assert!(ch.is_finite());
            assert!(st.u.min() >= 0.0);
        }
    }
    let s = line_jacobi_distributed(&mut st, &film, &cfg).unwrap();
    assert!(s.values.iter().all(|v| v.is_finite()));
    assert!(st.u.min() >= 0.0);
}

#[test]
fn small_solve_is_complementary() {
    let mut cfg = config();
    cfg.coarsest_n = 17;
    cfg.levels = 2;
    cfg.direct_film = true;
    let (sol, rep) = solve_ehl(&cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::Converged);
    let st = &sol.finest;
    let r = ehl_residual(st, cfg.spec);
    let rn = r.interior_max_abs();
    assert!(st.u.min() >= 0.0);
    let mut comp = 0.0f64;
    for k in 0..r.values.len() {
        comp = comp.max((st.u.values[k] * r.values[k]).abs());
        if st.u.values[k] == 0.0 && !st.level.is_boundary(k % 33, k / 33) {
            assert!(r.values[k] <= 1e-7);
        }
    }
    assert!(comp <= 1e-7 * rn.max(1.0));
    assert!((st.load() - LOAD).abs() / LOAD < 1e-6);
    let (hm, hc) = st.hm_hc();
    assert!(hm > 0.0 && hc > hm);
    assert_eq!(rep.levels.len(), 2);
    assert_eq!(rep.pairs.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn sweeps_keep_pressure_nonnegative(seed in any::<u64>()) {
        let cfg = config();
        let (mut st, film) = hertz_state(17, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for j in 1..16 {
            for i in 1..16 {
                st.u.set(i, j, (st.u.get(i, j) + rng.gen_range(-0.3..0.3)).max(0.0));
            }
        }
        st.h00 = rng.gen_range(-0.6..0.2);
        film.update(&mut st).unwrap();
        refresh_coefficients(&mut st, &cfg.physics);
        for _ in 0..3 {
            relax_sweep(&mut st, &film, &cfg, None).unwrap();
            prop_assert!(st.u.min() >= 0.0);
        }
    }
}
