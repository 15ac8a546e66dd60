use proptest::prelude::*;
use qesdyn::dynamics::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

fn fd_jacobian(p: &ModelParams, s: PhaseState, h: f64) -> [[f64; 2]; 2] {
    let dx = |d: f64| vector_field(p, PhaseState::new(s.x + d, s.y));
    let dy = |d: f64| vector_field(p, PhaseState::new(s.x, s.y + d));
    let (xp, xm, yp, ym) = (dx(h), dx(-h), dy(h), dy(-h));
    [
        [(xp.x - xm.x) / (2.0 * h), (yp.x - ym.x) / (2.0 * h)],
        [(xp.y - xm.y) / (2.0 * h), (yp.y - ym.y) / (2.0 * h)],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobian_matches_central_differences(g in -3.0f64..3.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let p = ModelParams::with_g(g);
        let s = PhaseState::new(x, y);
        let (an, fd) = (jacobian(&p, s), fd_jacobian(&p, s, 1e-6));
        for i in 0..2 {
            for k in 0..2 {
                prop_assert!((an[i][k] - fd[i][k]).abs() <= 1e-6, "{:?} vs {:?}", an, fd);
            }
        }
    }

    #[test]
    fn fixed_points_are_stationary_with_traceless_spectrum(g in -4.0f64..4.0) {
        let p = ModelParams::with_g(g);
        for fp in fixed_points(&p, false) {
            let s = fp.real_location().unwrap();
            prop_assert!(vector_field(&p, s).norm() <= 1e-12);
            let j = jacobian(&p, s);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let [l1, l2] = fp.eigenvalues;
            prop_assert!((l1 + l2).norm() <= 1e-12);
            prop_assert!(((l1 * l2).re - det).abs() <= 1e-12 * det.abs().max(1.0));
            prop_assert!((l1 * l2).im.abs() <= 1e-12);
        }
    }

    #[test]
    fn classification_follows_thresholds(g in -4.0f64..4.0) {
        let fps = fixed_points(&ModelParams::with_g(g), false);
        let class_of = |f: Family| fps.iter().find(|r| r.family == f).map(|r| r.class);
        if g > -SQRT_2 + 1e-6 {
            prop_assert_eq!(class_of(Family::I), Some(StabilityClass::Center));
        }
        if g < SQRT_2 - 1e-6 {
            prop_assert_eq!(class_of(Family::II), Some(StabilityClass::Saddle));
        }
        if g > SQRT_2 + 1e-6 {
            prop_assert_eq!(class_of(Family::II), Some(StabilityClass::Center));
            prop_assert_eq!(class_of(Family::III), Some(StabilityClass::Saddle));
            prop_assert_eq!(class_of(Family::IV), Some(StabilityClass::Saddle));
        }
        if g > 0.0 && g < SQRT_2 - 1e-6 {
            prop_assert_eq!(class_of(Family::III), None);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Orbits around the center conserve H to RK4 accuracy.
    #[test]
    fn hamiltonian_is_conserved_near_center(g in 0.27f64..0.59, dx in -0.15f64..0.15, y0 in -0.1f64..0.1) {
        let p = ModelParams::with_g(g);
        let tr = integrate(&p, PhaseState::new(FRAC_1_SQRT_2 + dx, y0), 1e-3, 100.0).unwrap();
        prop_assert!(tr.is_complete());
        let h0 = tr.samples[0].h;
        prop_assert!(tr.max_energy_drift() <= 1e-8 * h0.abs().max(1.0));
    }
}

#[test]
fn drift_at_reference_orbit() {
    let tr = integrate(&ModelParams::with_g(0.4), PhaseState::new(0.8, 0.0), 1e-3, 100.0).unwrap();
    assert_eq!(tr.samples.len(), 100_001);
    assert!(tr.max_energy_drift() <= 1e-8);
}

#[test]
fn small_amplitude_period_matches_linearization() {
    let g = 0.4;
    let tr = integrate(
        &ModelParams::with_g(g),
        PhaseState::new(FRAC_1_SQRT_2 + 1e-3, 0.0),
        1e-3,
        20.0,
    )
    .unwrap();
    let period = measure_period(&tr).unwrap();
    let linear = 2.0 * PI / (2.0 * SQRT_2 * (1.0 + g / SQRT_2)).sqrt();
    assert!((linear - 3.2986).abs() < 1e-4);
    assert!((period - linear).abs() <= 0.005 * linear, "{period} vs {linear}");
}

#[test]
fn escaping_orbit_has_no_period() {
    let tr = integrate(&ModelParams::with_g(1.0), PhaseState::new(-0.8, 0.0), 1e-3, 50.0).unwrap();
    assert!(measure_period(&tr).is_err());
}

#[test]
fn scan_transition_only_at_sqrt2() {
    let rows = bifurcation_scan(DEFAULT_A, DEFAULT_B, 0.05, 3.0, 296).unwrap();
    let fam2: Vec<_> = rows.iter().filter(|r| r.family == Family::II).collect();
    for w in fam2.windows(2) {
        if w[0].class != w[1].class {
            assert!(
                w[0].g < SQRT_2 && w[1].g > SQRT_2,
                "transition at {} -> {}",
                w[0].g,
                w[1].g
            );
        }
    }
}
