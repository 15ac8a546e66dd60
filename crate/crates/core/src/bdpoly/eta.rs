use crate::dynamics::ModelParams;
use crate::hamiltonics::{gauge_params, reduced_equation, schrodinger_residual, GaugedSeries};
use crate::{Error, Result};
use serde::Serialize;

/// Frobenius branch of the reduced equation at `Q = 0`. The indicial
/// exponents are 0 and 2; they resonate, so the exponent-0 series exists
/// only when `c0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaBranch {
    /// `h0 = 0, h1 = 1`
    Quadratic,
    /// `h0 = 1, h1 = 0`
    Constant,
}

/// Relative size below which a coefficient counts as vanished.
pub const TRUNCATION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaSeries {
    pub e_star: f64,
    pub branch: EtaBranch,
    /// `h[n]` multiplies `Q^(2n)`.
    pub coeffs: Vec<f64>,
    /// False for the constant branch at `c0 != 0`, where no such series
    /// exists; `coeffs` is then empty.
    pub consistent: bool,
    /// Smallest `n >= 2` with `h[n]` and `h[n+1]` both negligible.
    pub truncation_index: Option<usize>,
    /// Schrödinger residual of the truncated `psi` on `Q` in `[0.1, 2]`.
    pub residual: Option<f64>,
}

fn residual_grid() -> Vec<f64> {
    (0..39).map(|i| 0.1 + 0.05 * i as f64).collect()
}

/// Even-power series for `eta` from
///
/// ```text
/// 4n(n-1) h_n = (8 alpha (n-1) - c0) h_{n-1} + (16 beta (n-2) - c2) h_{n-2}
/// ```
pub fn eta_series(p: &ModelParams, e_star: f64, n_max: usize, branch: EtaBranch) -> Result<EtaSeries> {
    if n_max < 3 {
        return Err(Error::BadParams("n_max must be >= 3".into()));
    }
    let eq = reduced_equation(p, e_star)?;
    let (g2, g3, g5) = (p.g * p.g, p.g.powi(3), p.g.powi(5));
    let c0_scale = 16.0 * (e_star.abs() / g2 + p.a / g5 + p.b.abs() / g3);
    let consistent = branch == EtaBranch::Quadratic || eq.c0.abs() <= 1e-12 * c0_scale;
    if !consistent {
        return Ok(EtaSeries {
            e_star,
            branch,
            coeffs: Vec::new(),
            consistent,
            truncation_index: None,
            residual: None,
        });
    }

    let mut h = vec![0.0; n_max + 1];
    match branch {
        EtaBranch::Quadratic => h[1] = 1.0,
        EtaBranch::Constant => h[0] = 1.0,
    }
    for n in 2..=n_max {
        let nf = n as f64;
        h[n] = ((8.0 * eq.alpha * (nf - 1.0) - eq.c0) * h[n - 1] + (16.0 * eq.beta * (nf - 2.0) - eq.c2) * h[n - 2])
            / (4.0 * nf * (nf - 1.0));
    }

    let mut truncation_index = None;
    let mut running_max = h[0].abs().max(h[1].abs());
    for n in 2..n_max {
        let tiny = TRUNCATION_THRESHOLD * running_max;
        if h[n].abs() <= tiny && h[n + 1].abs() <= tiny {
            truncation_index = Some(n);
            break;
        }
        running_max = running_max.max(h[n].abs());
    }

    let residual = truncation_index.map(|n| {
        let series = GaugedSeries {
            gauge: gauge_params(p).expect("validated by reduced_equation"),
            even_coeffs: h[..n].to_vec(),
        };
        schrodinger_residual(p, e_star, |q| series.psi(q), &residual_grid())
    });
    Ok(EtaSeries {
        e_star,
        branch,
        coeffs: h,
        consistent,
        truncation_index,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdpoly::{build_recursion, solve_qes_g, structural_root, Branch, Flavor};
    use crate::dynamics::{DEFAULT_A, DEFAULT_B};

    #[test]
    fn second_coefficient_tracks_bd_ratio() {
        let p = ModelParams::with_g(0.45);
        let rec = build_recursion(&p, None, Flavor::Physical).unwrap();
        for e in [-11.0, -3.3, 2.0] {
            let s = eta_series(&p, e, 6, EtaBranch::Quadratic).unwrap();
            let expected = 4.0 * rec.eval(2, e) / rec.eval(1, e);
            assert!((32.0 * s.coeffs[2] - expected).abs() <= 1e-10 * expected.abs());
        }
    }

    #[test]
    fn generic_energy_does_not_truncate() {
        let s = eta_series(&ModelParams::with_g(0.45), -7.123, 30, EtaBranch::Quadratic).unwrap();
        assert!(s.consistent);
        assert_eq!(s.truncation_index, None);
        assert_eq!(s.residual, None);
    }

    #[test]
    fn constant_branch_needs_vanishing_c0() {
        let p = ModelParams::with_g(0.45);
        assert!(!eta_series(&p, -7.0, 5, EtaBranch::Constant).unwrap().consistent);
        assert!(
            eta_series(&p, structural_root(&p), 5, EtaBranch::Constant)
                .unwrap()
                .consistent
        );
        assert!(eta_series(&p, -7.0, 2, EtaBranch::Quadratic).is_err());
    }

    /// On the printed-branch J = 1 coupling both c0 and c2 vanish at the
    /// structural root, so eta = 1 and psi is the bare gauge factor.
    #[test]
    fn printed_j1_ground_state_is_exact() {
        let g = solve_qes_g(1, DEFAULT_A, DEFAULT_B, Branch::Printed).unwrap()[0];
        let p = ModelParams::with_g(g);
        let s = eta_series(&p, structural_root(&p), 12, EtaBranch::Constant).unwrap();
        assert_eq!(s.truncation_index, Some(2));
        assert!(s.residual.unwrap() <= 1e-10, "{:?}", s.residual);

        // the quadratic branch resonates there and does not terminate
        let q = eta_series(&p, structural_root(&p), 12, EtaBranch::Quadratic).unwrap();
        assert_eq!(q.truncation_index, None);
    }
}
