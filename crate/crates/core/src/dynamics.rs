//! The classical two-dimensional system, its fixed points and trajectories.
//!
//! With potential `V(x) = a x^3 - b x` the flow is
//!
//! ```text
//! x' = y + g x y
//! y' = b - 3 a x^2 - g y^2 / 2
//! ```
//!
//! which for the default `a = 2/3, b = 1` is `y' = 1 - 2 x^2 - g y^2 / 2`.

use crate::hamiltonics::hamiltonian_value;
use crate::numerics::rk4_step;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

pub const DEFAULT_A: f64 = 2.0 / 3.0;
pub const DEFAULT_B: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub a: f64,
    pub b: f64,
    pub g: f64,
}

impl ModelParams {
    pub fn new(a: f64, b: f64, g: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() || !g.is_finite() {
            return Err(Error::BadParams(format!(
                "need finite a > 0, b, g; got a={a}, b={b}, g={g}"
            )));
        }
        Ok(Self { a, b, g })
    }

    /// Default potential (`a = 2/3`, `b = 1`) at coupling `g`.
    pub fn with_g(g: f64) -> Self {
        Self {
            a: DEFAULT_A,
            b: DEFAULT_B,
            g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

pub fn vector_field(p: &ModelParams, s: PhaseState) -> PhaseState {
    PhaseState {
        x: s.y + p.g * s.x * s.y,
        y: p.b - 3.0 * p.a * s.x * s.x - 0.5 * p.g * s.y * s.y,
    }
}

pub fn jacobian(p: &ModelParams, s: PhaseState) -> [[f64; 2]; 2] {
    [[p.g * s.y, 1.0 + p.g * s.x], [-6.0 * p.a * s.x, -p.g * s.y]]
}

/// The four fixed-point families, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `(+sqrt(b/3a), 0)`
    I,
    /// `(-sqrt(b/3a), 0)`
    II,
    /// `(-1/g, +y*)`
    III,
    /// `(-1/g, -y*)`
    IV,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::I => "i",
            Family::II => "ii",
            Family::III => "iii",
            Family::IV => "iv",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPointLocation {
    Real(PhaseState),
    Complex { x: Complex64, y: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Center,
    Saddle,
    Degenerate,
    NonReal,
}

impl StabilityClass {
    pub fn label(self) -> &'static str {
        match self {
            StabilityClass::Center => "center",
            StabilityClass::Saddle => "saddle",
            StabilityClass::Degenerate => "degenerate",
            StabilityClass::NonReal => "non_real",
        }
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub family: Family,
    pub location: FixedPointLocation,
    /// `(lambda, -lambda)` with `lambda` on the positive real or imaginary axis.
    pub eigenvalues: [Complex64; 2],
    /// `lambda^2 = -det J`; real at every fixed point of this system.
    pub lambda_sq: f64,
    /// Largest squared Jacobian entry, floored at 1; sets the degeneracy scale.
    pub scale: f64,
    pub class: StabilityClass,
}

impl FixedPointReport {
    pub fn real_location(&self) -> Option<PhaseState> {
        match self.location {
            FixedPointLocation::Real(s) => Some(s),
            FixedPointLocation::Complex { .. } => None,
        }
    }

    pub fn default_tolerance(&self) -> f64 {
        1e-12 * self.scale
    }
}

fn complex_report(p: &ModelParams, family: Family, x: Complex64, y: Complex64) -> FixedPointReport {
    let g = Complex64::new(p.g, 0.0);
    let j00 = g * y;
    let j01 = 1.0 + g * x;
    let j10 = -6.0 * p.a * x;
    let det = j00 * (-j00) - j01 * j10;
    let lambda_sq = -det.re;
    let lambda = Complex64::new(lambda_sq, 0.0).sqrt();
    let scale = [j00, j01, j10].iter().map(|z| z.norm_sqr()).fold(1.0, f64::max);
    let is_real = x.im == 0.0 && y.im == 0.0;
    let location = if is_real {
        FixedPointLocation::Real(PhaseState::new(x.re, y.re))
    } else {
        FixedPointLocation::Complex { x, y }
    };
    let mut report = FixedPointReport {
        family,
        location,
        eigenvalues: [lambda, -lambda],
        lambda_sq,
        scale,
        class: StabilityClass::NonReal,
    };
    if is_real {
        report.class = classify(&report, report.default_tolerance()).unwrap_or(StabilityClass::NonReal);
    }
    report
}

/// Fixed points of the flow with their Jacobian eigenvalues.
///
/// Families (i)/(ii) always exist. Families (iii)/(iv) need `g != 0`; they
/// are returned when real, or when `include_complex` is set (then with
/// class [`StabilityClass::NonReal`]).
pub fn fixed_points(p: &ModelParams, include_complex: bool) -> Vec<FixedPointReport> {
    let x0 = (p.b / (3.0 * p.a)).sqrt();
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut out = vec![
        complex_report(p, Family::I, re(x0), re(0.0)),
        complex_report(p, Family::II, re(-x0), re(0.0)),
    ];
    if p.g == 0.0 {
        return out;
    }
    let x = -1.0 / p.g;
    let ga = 2.0 / p.g;
    let mut y_sq = ga * (p.b - 3.0 * p.a / (p.g * p.g));
    let y_sq_scale = ga.abs() * (p.b.abs() + 3.0 * p.a / (p.g * p.g));
    if y_sq.abs() <= 1e-14 * y_sq_scale {
        y_sq = 0.0;
    }
    if y_sq >= 0.0 {
        let y = y_sq.sqrt();
        out.push(complex_report(p, Family::III, re(x), re(y)));
        out.push(complex_report(p, Family::IV, re(x), re(-y)));
    } else if include_complex {
        let y = (-y_sq).sqrt();
        out.push(complex_report(p, Family::III, re(x), Complex64::new(0.0, y)));
        out.push(complex_report(p, Family::IV, re(x), Complex64::new(0.0, -y)));
    }
    out
}

/// Center if `lambda^2 < -tol`, Saddle if `lambda^2 > tol`, else Degenerate.
pub fn classify(fp: &FixedPointReport, tol: f64) -> Result<StabilityClass> {
    if fp.real_location().is_none() {
        return Err(Error::NonRealFixedPoint);
    }
    Ok(if fp.lambda_sq < -tol {
        StabilityClass::Center
    } else if fp.lambda_sq > tol {
        StabilityClass::Saddle
    } else {
        StabilityClass::Degenerate
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub g: f64,
    pub family: Family,
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub class: StabilityClass,
}

/// Evenly spaced `g` grid including both endpoints.
pub fn g_grid(g_min: f64, g_max: f64, steps: usize) -> Vec<f64> {
    let h = (g_max - g_min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { g_max } else { g_min + h * i as f64 })
        .collect()
}

/// One row per grid point and real fixed point, ascending in `g` and
/// family order.
pub fn bifurcation_scan(a: f64, b: f64, g_min: f64, g_max: f64, steps: usize) -> Result<Vec<ScanRow>> {
    if steps < 2 || !(g_min < g_max) {
        return Err(Error::BadParams(format!(
            "scan needs steps >= 2 and g_min < g_max (got {steps}, {g_min}, {g_max})"
        )));
    }
    ModelParams::new(a, b, g_min)?;
    let rows = g_grid(g_min, g_max, steps)
        .into_iter()
        .flat_map(|g| {
            let p = ModelParams { a, b, g };
            fixed_points(&p, false).into_iter().map(move |fp| ScanRow {
                g,
                family: fp.family,
                re_lambda: fp.eigenvalues[0].re,
                im_lambda: fp.eigenvalues[0].im,
                class: fp.class,
            })
        })
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dt: f64,
    pub method: &'static str,
    /// Flow direction at the initial state; orients the return section.
    pub initial_velocity: PhaseState,
    /// Set when integration stopped early; `samples` then holds the
    /// partial trajectory.
    pub failure: Option<Error>,
}

impl Trajectory {
    pub fn max_energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        self.samples.iter().map(|s| (s.h - first.h).abs()).fold(0.0, f64::max)
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// RK4 trajectory of an arbitrary planar field, tagging each sample with
/// `energy(state)`.
pub fn integrate_field<F, H>(field: F, energy: H, s0: PhaseState, dt: f64, t_max: f64) -> Result<Trajectory>
where
    F: Fn(PhaseState) -> PhaseState,
    H: Fn(PhaseState) -> f64,
{
    if !(dt > 0.0) || !(t_max > dt) || !s0.x.is_finite() || !s0.y.is_finite() {
        return Err(Error::BadParams(format!(
            "need dt > 0, t_max > dt and a finite start (dt={dt}, t_max={t_max})"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let rate = |s: &[f64; 2]| {
        let v = field(PhaseState::new(s[0], s[1]));
        [v.x, v.y]
    };
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample {
        t: 0.0,
        x: s0.x,
        y: s0.y,
        h: energy(s0),
    });
    let mut state = [s0.x, s0.y];
    let mut failure = None;
    for k in 1..=steps {
        let t = k as f64 * dt;
        match rk4_step(rate, &state, dt) {
            Ok(next) => state = next,
            Err(_) => {
                failure = Some(Error::NonFiniteState { t });
                break;
            }
        }
        let s = PhaseState::new(state[0], state[1]);
        let h = energy(s);
        if !h.is_finite() {
            failure = Some(Error::NonFiniteState { t });
            break;
        }
        samples.push(TrajectorySample { t, x: s.x, y: s.y, h });
    }
    Ok(Trajectory {
        samples,
        dt,
        method: "rk4",
        initial_velocity: field(s0),
        failure,
    })
}

/// RK4 trajectory of the model flow with the Hamiltonian along the path.
pub fn integrate(p: &ModelParams, s0: PhaseState, dt: f64, t_max: f64) -> Result<Trajectory> {
    integrate_field(|s| vector_field(p, s), |s| hamiltonian_value(p, s), s0, dt, t_max)
}

/// Return time to the section `y = y0`, crossed in the initial direction of
/// `y'`, from the first two such crossings after the start.
pub fn measure_period(tr: &Trajectory) -> Result<f64> {
    let Some(first) = tr.samples.first() else {
        return Err(Error::NoReturn);
    };
    let dir = tr.initial_velocity.y;
    if dir == 0.0 || !dir.is_finite() {
        return Err(Error::NoReturn);
    }
    let y0 = first.y;
    let mut crossings = tr.samples.windows(2).filter_map(|w| {
        let (s0, s1) = ((w[0].y - y0) * dir.signum(), (w[1].y - y0) * dir.signum());
        (s0 < 0.0 && s1 >= 0.0).then(|| w[0].t + (w[1].t - w[0].t) * (-s0) / (s1 - s0))
    });
    match (crossings.next(), crossings.next()) {
        (Some(t1), Some(t2)) => Ok(t2 - t1),
        _ => Err(Error::NoReturn),
    }
}
