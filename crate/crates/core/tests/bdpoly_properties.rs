use proptest::prelude::*;
use qesdyn::bdpoly::*;
use qesdyn::dynamics::{ModelParams, DEFAULT_A, DEFAULT_B};

fn table_g(j: u32) -> f64 {
    solve_qes_g(j, DEFAULT_A, DEFAULT_B, Branch::Table).unwrap()[0]
}

/// n! (n-1)! 4^n as f64
fn series_weight(n: u32) -> f64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    fact(n) * fact(n - 1) * 4f64.powi(n as i32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The even-power series coefficients of eta are the physical BD
    /// polynomials up to the factorial weight and a common constant.
    #[test]
    fn series_recurrence_reproduces_bd_polynomials(g in 0.2f64..1.5, e in -60.0f64..20.0) {
        let p = ModelParams::with_g(g);
        let rec = build_recursion(&p, None, Flavor::Physical).unwrap();
        let p1 = rec.eval(1, e);
        prop_assume!(p1.abs() > 1e-6 * (16.0 / (g * g)) * (e.abs() + 1.0));
        let s = eta_series(&p, e, 12, EtaBranch::Quadratic).unwrap();
        for n in 1..=12u32 {
            let from_bd = 4.0 * rec.eval(n, e) / (p1 * series_weight(n));
            let h = s.coeffs[n as usize];
            let scale = from_bd.abs().max(h.abs()).max(1e-300);
            prop_assert!((h - from_bd).abs() <= 1e-10 * scale, "n={} h={} bd={}", n, h, from_bd);
        }
    }

    #[test]
    fn closed_forms_match_recursion_roots(g in 0.2f64..1.0) {
        let p = ModelParams::with_g(g);
        for j in 1..=2 {
            let cf = closed_forms(&p, j).unwrap();
            let tri = tridiagonal_energies(&p, j).unwrap();
            for (c, t) in cf.iter().zip(&tri) {
                prop_assert!((c - t).abs() <= 1e-9 * c.abs().max(1.0));
            }
        }
    }

    #[test]
    fn structural_root_is_shared(g in 0.2f64..2.0, j in 1u32..8) {
        let p = ModelParams::with_g(g);
        let e = structural_root(&p);
        let rec = build_recursion(&p, Some(j), Flavor::Truncating).unwrap();
        for n in 1..=15 {
            let scale = monic_scale(&rec, n, e - 80.0, e + 5.0);
            prop_assert!(rec.eval_monic(n, e).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn factorization_and_reality_through_j10() {
    for j in 1..=10 {
        let p = ModelParams::with_g(table_g(j));
        assert!(factorization_check(&p, j, 5).unwrap() <= 1e-8, "J={j}");
        let rec = build_recursion(&p, Some(j), Flavor::Truncating).unwrap();
        if j >= 3 {
            assert!(reality_certificate(&rec, j).unwrap() > 0.0);
        }
        let s = spectrum(&p, j, Method::Tridiagonal).unwrap();
        assert!(s.diagnostics.companion_max_imag <= 1e-8 * s.energies[0].abs());
        assert!(s.energies.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn table_couplings_decrease() {
    let gs: Vec<f64> = (1..=10).map(table_g).collect();
    assert!(gs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn tridiagonal_and_companion_agree_through_j10() {
    for j in 1..=10 {
        let p = ModelParams::with_g(table_g(j));
        let tri = tridiagonal_energies(&p, j).unwrap();
        let comp = companion_energies(&p, j).unwrap();
        for (t, c) in tri.iter().zip(&comp) {
            assert!((t - c).abs() <= 1e-8 * t.abs(), "J={j}: {t} vs {c}");
        }
    }
}

#[test]
fn extended_oracle_agrees_through_j10() {
    for j in 1..=10 {
        let p = ModelParams::with_g(table_g(j));
        let oracle = extended_roots(&p, j, 256).unwrap();
        assert!(oracle.all_certified(), "J={j}");
        let tri = tridiagonal_energies(&p, j).unwrap();
        for (o, t) in oracle.values().iter().zip(&tri) {
            assert!((o - t).abs() <= 1e-9 * t.abs(), "J={j}: {o} vs {t}");
        }
    }
}

#[test]
fn eta_series_on_table_branch_is_a_finding() {
    // the physical and truncating recursions differ on the table branch, so
    // the series built at a QES level is not expected to terminate there
    let j = 3;
    let p = ModelParams::with_g(table_g(j));
    let levels = tridiagonal_energies(&p, j).unwrap();
    for e in levels {
        let s = eta_series(&p, e, 20, EtaBranch::Quadratic).unwrap();
        assert!(s.truncation_index.is_none(), "unexpected truncation at E={e}");
    }
}
