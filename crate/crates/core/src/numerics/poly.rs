use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Dense real polynomial, `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Trailing (highest-degree) zeros are dropped so the leading
    /// coefficient is nonzero.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        if lead == 0.0 {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / lead).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `(x - shift) * self`
    pub fn mul_linear(&self, shift: f64) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= shift * c;
        }
        Self::new(out)
    }

    /// `self + s * other`
    pub fn add_scaled(&self, other: &Poly, s: f64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + s * other.coeffs.get(k).copied().unwrap_or(0.0))
            .collect();
        Self::new(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// All complex roots with multiplicity, as eigenvalues of the companion
/// matrix of the monic rescaling. Sorted by real part, then imaginary part.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let Some(n) = p.degree() else {
        return Err(Error::DegenerateInput("zero polynomial has no finite root set"));
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = p.monic();
    let c = monic.coeffs();
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -c[i];
    }
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NoConvergence);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}
