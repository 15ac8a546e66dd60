use super::recursion::{build_recursion, Branch, Flavor, Recursion};
use crate::dynamics::ModelParams;
use crate::numerics::{eig_symmetric_tridiagonal, poly_roots, TriDiag};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tridiagonal,
    Companion,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Tridiagonal => "tridiagonal",
            Method::Companion => "companion",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Number of higher polynomials checked by default for factorization.
pub const DEFAULT_K_MAX: u32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDiagnostics {
    pub method: Method,
    /// Largest `|E_tri - E_comp| / max(|E|, 1)`.
    pub cross_method_deviation: f64,
    /// Largest imaginary part among the companion roots.
    pub companion_max_imag: f64,
    /// Smallest Jacobi coupling `c_n`, `3 <= n <= J`; `None` when `J < 3`.
    pub reality_certificate: Option<f64>,
    /// Largest scaled `|P^_{J+k}(E*)|` for `k <= k_max`.
    pub factorization_residual: f64,
    pub factorization_k_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QESSpectrum {
    pub j: u32,
    pub g: f64,
    pub a: f64,
    pub b: f64,
    /// Branch of the QES condition `g` satisfies, if any.
    pub branch: Option<Branch>,
    /// Ascending.
    pub energies: Vec<f64>,
    pub diagnostics: SpectrumDiagnostics,
}

fn truncating(p: &ModelParams, j: u32) -> Result<Recursion> {
    if j == 0 {
        return Err(Error::BadParams("J must be >= 1".into()));
    }
    build_recursion(p, Some(j), Flavor::Truncating)
}

/// Jacobi matrix of the first `j` monic polynomials of `rec`:
/// `diag(b_1..b_j)`, off-diagonal `sqrt(c_2)..sqrt(c_j)`.
pub fn jacobi_matrix(rec: &Recursion, j: u32) -> Result<TriDiag> {
    let diag = (1..=j).map(|n| rec.monic_b(n)).collect();
    let mut off = Vec::with_capacity(j.saturating_sub(1) as usize);
    for n in 2..=j {
        let c = rec.monic_c(n);
        if c < 0.0 {
            return Err(Error::NonRealDetected { n, value: c });
        }
        off.push(c.sqrt());
    }
    TriDiag::new(diag, off)
}

/// `min c_n` over `3 <= n <= j`.
pub fn reality_certificate(rec: &Recursion, j: u32) -> Option<f64> {
    (3..=j).map(|n| rec.monic_c(n)).reduce(f64::min)
}

pub fn tridiagonal_energies(p: &ModelParams, j: u32) -> Result<Vec<f64>> {
    let rec = truncating(p, j)?;
    eig_symmetric_tridiagonal(&jacobi_matrix(&rec, j)?)
}

/// Centre and width used to condition the companion matrix: the mean
/// diagonal entry and the larger of the diagonal spread and the couplings.
fn companion_frame(rec: &Recursion, j: u32) -> (f64, f64) {
    let bs: Vec<f64> = (1..=j).map(|n| rec.monic_b(n)).collect();
    let center = bs.iter().sum::<f64>() / j as f64;
    let spread = bs.iter().map(|b| (b - center).abs()).fold(0.0, f64::max);
    let coupling = (2..=j).map(|n| rec.monic_c(n).abs().sqrt()).fold(0.0, f64::max);
    let scale = spread.max(coupling);
    (center, if scale > 0.0 { scale } else { 1.0 })
}

/// Roots of `P_J` as companion-matrix eigenvalues, expanded in the
/// centred and scaled variable.
pub fn companion_roots(p: &ModelParams, j: u32) -> Result<Vec<Complex64>> {
    let rec = truncating(p, j)?;
    let (center, scale) = companion_frame(&rec, j);
    let poly = rec.expand_monic_scaled(j, center, scale);
    Ok(poly_roots(&poly)?.into_iter().map(|z| z * scale + center).collect())
}

pub fn companion_energies(p: &ModelParams, j: u32) -> Result<Vec<f64>> {
    let mut e: Vec<f64> = companion_roots(p, j)?.iter().map(|z| z.re).collect();
    e.sort_by(|a, b| a.total_cmp(b));
    Ok(e)
}

/// Largest scaled `|P^_{J+k}(E*)|` over the roots `E*` of `P_J` and
/// `1 <= k <= k_max`. Each value is divided by the largest `|P^_{J+k}|` on
/// a 201-point grid over the root interval widened by one unit.
pub fn factorization_residual(rec: &Recursion, j: u32, roots: &[f64], k_max: u32) -> f64 {
    let (Some(&lo), Some(&hi)) = (roots.first(), roots.last()) else {
        return 0.0;
    };
    let (lo, hi) = (lo - 1.0, hi + 1.0);
    let mut worst = 0.0f64;
    for k in 1..=k_max {
        let n = j + k;
        let scale = monic_scale(rec, n, lo, hi);
        for &e in roots {
            worst = worst.max(rec.eval_monic(n, e).abs() / scale);
        }
    }
    worst
}

/// `max |P^_n|` on a 201-point grid over `[lo, hi]`.
pub fn monic_scale(rec: &Recursion, n: u32, lo: f64, hi: f64) -> f64 {
    (0..=200)
        .map(|i| rec.eval_monic(n, lo + (hi - lo) * i as f64 / 200.0).abs())
        .fold(f64::MIN_POSITIVE, f64::max)
}

pub fn factorization_check(p: &ModelParams, j: u32, k_max: u32) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::BadParams("k_max must be >= 1".into()));
    }
    let rec = truncating(p, j)?;
    let roots = eig_symmetric_tridiagonal(&jacobi_matrix(&rec, j)?)?;
    Ok(factorization_residual(&rec, j, &roots, k_max))
}

/// QES levels of `P_J` at `(a, b, g)` with cross-method and structural
/// diagnostics. Both root routes are always run; `method` selects which
/// one supplies `energies`.
pub fn spectrum(p: &ModelParams, j: u32, method: Method) -> Result<QESSpectrum> {
    let rec = truncating(p, j)?;
    let jacobi = jacobi_matrix(&rec, j)?;
    let tri = eig_symmetric_tridiagonal(&jacobi)?;
    let comp_roots = companion_roots(p, j)?;
    let companion_max_imag = comp_roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut comp: Vec<f64> = comp_roots.iter().map(|z| z.re).collect();
    comp.sort_by(|a, b| a.total_cmp(b));
    let cross_method_deviation = tri
        .iter()
        .zip(&comp)
        .map(|(t, c)| (t - c).abs() / t.abs().max(1.0))
        .fold(0.0, f64::max);
    let energies = match method {
        Method::Tridiagonal => tri,
        Method::Companion => comp,
    };
    let factorization_residual = factorization_residual(&rec, j, &energies, DEFAULT_K_MAX);
    Ok(QESSpectrum {
        j,
        g: p.g,
        a: p.a,
        b: p.b,
        branch: Branch::detect(j, p.a, p.b, p.g, 1e-9),
        energies,
        diagnostics: SpectrumDiagnostics {
            method,
            cross_method_deviation,
            companion_max_imag,
            reality_certificate: reality_certificate(&rec, j),
            factorization_residual,
            factorization_k_max: DEFAULT_K_MAX,
        },
    })
}

/// The energy every `P_n`, `n >= 1`, vanishes at: `b/g - a/g^3`.
pub fn structural_root(p: &ModelParams) -> f64 {
    p.b / p.g - p.a / p.g.powi(3)
}

/// Closed-form levels for `J = 1` and `J = 2`, ascending.
pub fn closed_forms(p: &ModelParams, j: u32) -> Result<Vec<f64>> {
    let e1 = structural_root(p);
    match j {
        1 => Ok(vec![e1]),
        2 => Ok(vec![e1 - 1.5 * (2.0 * p.a / p.g).sqrt(), e1]),
        _ => Err(Error::BadParams(format!(
            "closed forms exist for J = 1, 2 only (got {j})"
        ))),
    }
}
