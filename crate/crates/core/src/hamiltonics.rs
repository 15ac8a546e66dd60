//! Position-dependent-mass Hamiltonian and its map to a sextic oscillator.
//!
//! `H = (1 + g x) p^2 / 2 + a x^3 - b x` generates the classical flow. The
//! point transformation `x = (2Q^2 - 1)/g`, `p = g P / (4Q)` is canonical and
//! turns the potential into an even sextic in `Q`. The quantum problem is
//!
//! ```text
//! psi'' - psi'/Q + (16/g^2) (E - V(Q)) psi = 0        (hbar = 1)
//! ```
//!
//! and the gauge `psi = exp(-alpha Q^2 - beta Q^4) eta` removes the `Q^4` and
//! `Q^6` terms from the equation for `eta`.

use crate::dynamics::{ModelParams, PhaseState};
use crate::numerics::central_difference;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Transformed canonical pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorState {
    pub q: f64,
    pub p: f64,
}

impl OscillatorState {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }
}

pub fn potential_x(p: &ModelParams, x: f64) -> f64 {
    p.a * x * x * x - p.b * x
}

pub fn hamiltonian_value(p: &ModelParams, s: PhaseState) -> f64 {
    0.5 * (1.0 + p.g * s.x) * s.y * s.y + potential_x(p, s.x)
}

fn require_positive_g(p: &ModelParams) -> Result<()> {
    if !(p.g > 0.0) || !(p.a > 0.0) {
        return Err(Error::BadParams(format!(
            "need g > 0 and a > 0 (got g={}, a={})",
            p.g, p.a
        )));
    }
    Ok(())
}

/// `(Q, P) -> (x, p)`.
pub fn canonical_map(p: &ModelParams, o: OscillatorState) -> Result<PhaseState> {
    if o.q == 0.0 || p.g == 0.0 {
        return Err(Error::SingularMap { q: o.q, g: p.g });
    }
    Ok(PhaseState {
        x: (2.0 * o.q * o.q - 1.0) / p.g,
        y: 0.25 * p.g * o.p / o.q,
    })
}

/// Jacobian determinant `d(x,p)/d(Q,P)` from central differences.
pub fn canonical_determinant_fd(p: &ModelParams, o: OscillatorState, h: f64) -> Result<f64> {
    canonical_map(p, o)?;
    let x_of = |q: f64, pp: f64| {
        canonical_map(p, OscillatorState::new(q, pp))
            .map(|s| s.x)
            .unwrap_or(f64::NAN)
    };
    let p_of = |q: f64, pp: f64| {
        canonical_map(p, OscillatorState::new(q, pp))
            .map(|s| s.y)
            .unwrap_or(f64::NAN)
    };
    let dx_dq = central_difference(|q| x_of(q, o.p), o.q, h);
    let dx_dp = central_difference(|pp| x_of(o.q, pp), o.p, h);
    let dp_dq = central_difference(|q| p_of(q, o.p), o.q, h);
    let dp_dp = central_difference(|pp| p_of(o.q, pp), o.p, h);
    Ok(dx_dq * dp_dp - dx_dp * dp_dq)
}

/// `Q` drawn with `0.05 <= |Q| <= 2`; keeps the difference quotients well
/// conditioned and clear of the `Q = 0` singularity.
fn sample_state(rng: &mut ChaCha8Rng) -> OscillatorState {
    let mag: f64 = rng.gen_range(0.05..=2.0);
    let q = if rng.gen_bool(0.5) { mag } else { -mag };
    OscillatorState::new(q, rng.gen_range(-2.0..=2.0))
}

/// Largest `|det - 1|` over `samples` seeded draws, `h = 1e-6`.
pub fn verify_canonical(p: &ModelParams, samples: usize, seed: u64) -> Result<f64> {
    if p.g == 0.0 {
        return Err(Error::SingularMap { q: f64::NAN, g: 0.0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let det = canonical_determinant_fd(p, sample_state(&mut rng), 1e-6)?;
        worst = worst.max((det - 1.0).abs());
    }
    Ok(worst)
}

/// Sextic potential in the oscillator coordinate.
pub fn potential_q(p: &ModelParams, q: f64) -> f64 {
    let g3 = p.g * p.g * p.g;
    let q2 = q * q;
    let q4 = q2 * q2;
    8.0 * p.a * q4 * q2 / g3 - 12.0 * p.a * q4 / g3 + (6.0 * p.a / g3 - 2.0 * p.b / p.g) * q2 + (-p.a / g3 + p.b / p.g)
}

/// `|V(Q) - V(x(Q))|` relative to the summed term magnitudes of `V(Q)`.
pub fn pullback_residual(p: &ModelParams, q: f64) -> f64 {
    let g3 = p.g * p.g * p.g;
    let q2 = q * q;
    let scale = 8.0 * p.a * q2.powi(3) / g3
        + 12.0 * p.a * q2 * q2 / g3
        + (6.0 * p.a / g3 + 2.0 * p.b.abs() / p.g.abs()) * q2
        + (p.a / g3.abs() + p.b.abs() / p.g.abs());
    let x = (2.0 * q2 - 1.0) / p.g;
    (potential_q(p, q) - potential_x(p, x)).abs() / scale.max(1.0)
}

/// Largest pullback residual over `samples` seeded draws of `Q` in `[-2, 2]`.
pub fn max_pullback_residual(p: &ModelParams, samples: usize, seed: u64) -> Result<f64> {
    if p.g == 0.0 {
        return Err(Error::SingularMap { q: f64::NAN, g: 0.0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| pullback_residual(p, rng.gen_range(-2.0..=2.0)))
        .fold(0.0, f64::max))
}

/// Exponents of the gauge factor `exp(-alpha Q^2 - beta Q^4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GaugeParams {
    /// Relative deviation of `alpha beta` from `-12 a / g^5`.
    pub fn alpha_beta_deviation(&self, p: &ModelParams) -> f64 {
        let target = 12.0 * p.a / p.g.powi(5);
        (self.alpha * self.beta + target).abs() / target
    }

    /// Relative deviation of `beta^2` from `8 a / g^5`.
    pub fn beta_sq_deviation(&self, p: &ModelParams) -> f64 {
        let target = 8.0 * p.a / p.g.powi(5);
        (self.beta * self.beta - target).abs() / target
    }
}

pub fn gauge_params(p: &ModelParams) -> Result<GaugeParams> {
    require_positive_g(p)?;
    let g5 = p.g.powi(5);
    Ok(GaugeParams {
        alpha: -(18.0 * p.a / g5).sqrt(),
        beta: (8.0 * p.a / g5).sqrt(),
    })
}

/// Coefficients of the gauge-reduced equation
///
/// ```text
/// eta'' + (-1/Q - 4 alpha Q - 8 beta Q^3) eta' + (c0 + c2 Q^2 + c4 Q^4 + c6 Q^6) eta = 0
/// ```
///
/// `c4` and `c6` vanish for the gauge from [`gauge_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedEquation {
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ReducedEquation {
    pub fn drift(&self, q: f64) -> f64 {
        -1.0 / q - 4.0 * self.alpha * q - 8.0 * self.beta * q * q * q
    }

    pub fn potential_term(&self, q: f64) -> f64 {
        let q2 = q * q;
        self.c0 + q2 * (self.c2 + q2 * (self.c4 + q2 * self.c6))
    }

    /// Left-hand side for a given `eta` jet.
    pub fn lhs(&self, q: f64, eta: Jet) -> f64 {
        eta.d2 + self.drift(q) * eta.d1 + self.potential_term(q) * eta.value
    }
}

/// Reduction under an arbitrary gauge.
pub fn reduce_with_gauge(p: &ModelParams, energy: f64, gauge: GaugeParams) -> Result<ReducedEquation> {
    require_positive_g(p)?;
    let GaugeParams { alpha, beta } = gauge;
    let (g2, g3, g5) = (p.g * p.g, p.g.powi(3), p.g.powi(5));
    Ok(ReducedEquation {
        c0: 16.0 * energy / g2 + 16.0 * p.a / g5 - 16.0 * p.b / g3,
        c2: 4.0 * alpha * alpha - 8.0 * beta - 32.0 / g2 * (3.0 * p.a / g3 - p.b / p.g),
        c4: 16.0 * alpha * beta + 192.0 * p.a / g5,
        c6: 16.0 * beta * beta - 128.0 * p.a / g5,
        alpha,
        beta,
    })
}

pub fn reduced_equation(p: &ModelParams, energy: f64) -> Result<ReducedEquation> {
    let mut eq = reduce_with_gauge(p, energy, gauge_params(p)?)?;
    // the chosen gauge cancels these identically
    eq.c4 = 0.0;
    eq.c6 = 0.0;
    Ok(eq)
}

/// Value with first and second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn max_abs(&self) -> f64 {
        self.value.abs().max(self.d1.abs()).max(self.d2.abs())
    }
}

pub fn schrodinger_lhs(p: &ModelParams, energy: f64, q: f64, psi: Jet) -> f64 {
    psi.d2 - psi.d1 / q + 16.0 / (p.g * p.g) * (energy - potential_q(p, q)) * psi.value
}

/// Largest normalized residual of the transformed Schrödinger equation over
/// `samples`; each term is divided by `max(|psi|, |psi'|, |psi''|)` there.
pub fn schrodinger_residual<F: Fn(f64) -> Jet>(p: &ModelParams, energy: f64, psi: F, samples: &[f64]) -> f64 {
    samples
        .iter()
        .map(|&q| {
            let jet = psi(q);
            let scale = jet.max_abs();
            if scale == 0.0 {
                0.0
            } else {
                schrodinger_lhs(p, energy, q, jet).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// `psi = exp(-alpha Q^2 - beta Q^4) * sum_n h[n] Q^(2n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugedSeries {
    pub gauge: GaugeParams,
    pub even_coeffs: Vec<f64>,
}

impl GaugedSeries {
    pub fn eta(&self, q: f64) -> Jet {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (n, &h) in self.even_coeffs.iter().enumerate() {
            let k = 2 * n as i32;
            v += h * q.powi(k);
            if n >= 1 {
                let kf = k as f64;
                d1 += h * kf * q.powi(k - 1);
                d2 += h * kf * (kf - 1.0) * q.powi(k - 2);
            }
        }
        Jet::new(v, d1, d2)
    }

    pub fn psi(&self, q: f64) -> Jet {
        let GaugeParams { alpha, beta } = self.gauge;
        let q2 = q * q;
        let phi1 = 2.0 * alpha * q + 4.0 * beta * q2 * q;
        let phi2 = 2.0 * alpha + 12.0 * beta * q2;
        let w = (-alpha * q2 - beta * q2 * q2).exp();
        let eta = self.eta(q);
        Jet::new(
            w * eta.value,
            w * (eta.d1 - phi1 * eta.value),
            w * (eta.d2 - 2.0 * phi1 * eta.d1 + (phi1 * phi1 - phi2) * eta.value),
        )
    }
}
