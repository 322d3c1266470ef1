use proptest::prelude::*;
use tvd_ehl::limiter::*;
use tvd_ehl::Error;

const ALL: [LimiterSpec; 5] = LimiterSpec::TVD_KINDS;

fn step_profile() -> Vec<f64> {
    (0..80).map(|i| if (10..30).contains(&i) { 1.0 } else { 0.0 }).collect()
}

#[test]
fn ratio_examples() {
    assert_eq!(ratio_r(0.0, 1.0, 2.0, 3.0), (1.0, 1.0));
    let (r, _) = ratio_r(0.0, 0.0, 1.0, 0.0);
    assert!(r <= 0.0);
    let (r, _) = ratio_r(0.0, 1.0, 1.0, 2.0);
    assert!(r.is_finite() && r > 1e10);
    for s in ALL {
        assert_eq!(0.5 * limiter_phi(s, r) * 0.0, 0.0);
        assert_eq!(s.increment(0.0, 1.0), 0.0);
    }
}

#[test]
fn phi_examples() {
    assert_eq!(limiter_phi(LimiterSpec::Minmod, 0.5), 0.5);
    assert_eq!(limiter_phi(LimiterSpec::Minmod, 2.0), 1.0);
    assert_eq!(limiter_phi(LimiterSpec::VanLeer, 1.0), 1.0);
    assert_eq!(limiter_phi(LimiterSpec::Superbee, 0.5), 1.0);
    assert_eq!(limiter_phi(LimiterSpec::Superbee, 3.0), 2.0);
    assert!((limiter_phi(LimiterSpec::Koren, 0.5) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(limiter_phi(LimiterSpec::VanAlbada, 1.0), 1.0);
    for s in ALL {
        assert_eq!(limiter_phi(s, -1.0), 0.0);
        assert_eq!(limiter_phi(s, 1.0), 1.0, "{}", s.name());
        assert_eq!(limiter_phi(s, f64::NAN), 0.0);
    }
    assert_eq!(limiter_phi(LimiterSpec::KappaFixed(-1.0), 7.0), 1.0);
}

#[test]
fn parse_names() {
    for s in ALL {
        assert_eq!(LimiterSpec::parse(s.name(), 0.0).unwrap(), s);
    }
    assert_eq!(LimiterSpec::parse("Kappa_Fixed", 1.0 / 3.0).unwrap(), LimiterSpec::KappaFixed(1.0 / 3.0));
    assert!(matches!(LimiterSpec::parse("mc", 0.0), Err(Error::Config(_))));
    assert!(LimiterSpec::kappa_fixed(1.5).is_err());
}

#[test]
fn kappa_flux_matches_face_values() {
    let f = |x: f64| 0.3 * x * x * x - x * x + 2.0 * x + 0.5;
    let h = 0.1;
    for kappa in [-1.0, 0.0, 1.0 / 3.0, 0.5, 1.0] {
        let u: Vec<f64> = (0..4).map(|i| f(i as f64 * h)).collect();
        let face = |a: f64, b: f64, c: f64| b + 0.25 * (1.0 + kappa) * (c - b) + 0.25 * (1.0 - kappa) * (b - a);
        let want = face(u[1], u[2], u[3]) - face(u[0], u[1], u[2]);
        let got = kappa_flux_1d(u[0], u[1], u[2], u[3], LimiterSpec::KappaFixed(kappa));
        assert!((got.total() - want).abs() < 1e-15);
        assert_eq!(got.first_order, u[2] - u[1]);
    }
    // κ = −1: second-order upwind (3u_i − 4u_{i−1} + u_{i−2})/2.
    let g = kappa_flux_1d(1.0, 2.0, 4.5, 9.0, LimiterSpec::KappaFixed(-1.0));
    assert!((g.total() - (3.0 * 4.5 - 4.0 * 2.0 + 1.0) / 2.0).abs() < 1e-15);
}

#[test]
fn harten_examples() {
    assert!(harten_tvd_check(&[0.3; 5], &[0.4; 5]).unwrap());
    assert!(!harten_tvd_check(&[0.3, -0.1], &[0.4, 0.4]).unwrap());
    assert!(harten_tvd_check(&[0.5], &[0.5]).unwrap());
    assert!(!harten_tvd_check(&[0.6], &[0.5]).unwrap());
    assert!(harten_tvd_check(&[0.5], &[0.5, 0.1]).is_err());
}

#[test]
fn total_variation_examples() {
    let ramp: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    assert!((total_variation(&ramp) - 1.0).abs() < 1e-15);
    assert_eq!(total_variation(&[2.0; 6]), 0.0);
    assert_eq!(total_variation(&[0.0, 0.0, 1.0, 1.0, 0.0]), 2.0);
}

#[test]
fn limited_advection_is_tvd() {
    for s in ALL {
        let mut u = step_profile();
        for n in 0..100 {
            let next = advect_step(&u, 0.5, s);
            let (c, d) = advect_harten_coefficients(&u, 0.5, s);
            assert!(harten_tvd_check(&c, &d).unwrap(), "{} step {n}", s.name());
            assert!(total_variation(&next) <= total_variation(&u) + 1e-12, "{} step {n}", s.name());
            u = next;
        }
    }
}

#[test]
fn unlimited_kappa_is_not_tvd() {
    for kappa in [0.0, 1.0 / 3.0, 1.0] {
        let mut u = step_profile();
        let tv0 = total_variation(&u);
        let mut grew = false;
        for _ in 0..100 {
            u = advect_step(&u, 0.5, LimiterSpec::KappaFixed(kappa));
            grew |= total_variation(&u) > tv0 + 1e-12;
        }
        assert!(grew, "kappa {kappa}");
    }
}

proptest! {
    #[test]
    fn phi_in_tvd_region(r in -10.0..50.0f64) {
        for s in ALL {
            let p = limiter_phi(s, r);
            prop_assert!(p >= 0.0);
            if r > 0.0 {
                prop_assert!(p <= (2.0 * r).min(2.0) + 1e-15);
            } else {
                prop_assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn increment_matches_phi(up in -3.0..3.0f64, down in -3.0..3.0f64) {
        prop_assume!(up.abs() > 1e-6);
        for s in ALL {
            let want = 0.5 * limiter_phi(s, down / up) * up;
            prop_assert!((s.increment(up, down) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn flux_parts_sum(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, d in -2.0..2.0f64) {
        for s in ALL {
            let f = kappa_flux_1d(a, b, c, d, s);
            prop_assert!((f.total() - (c - b + s.increment(c - b, d - c) - s.increment(b - a, c - b))).abs() < 1e-14);
        }
    }
}
