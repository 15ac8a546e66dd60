//! Classical and quantum analysis of the PT-symmetric quadratic system
//!
//! ```text
//! x' = y + g x y
//! y' = 1 - 2 x^2 - g y^2 / 2
//! ```
//!
//! The crate is split along the pipeline:
//!
//! * [`numerics`]: root finding, tridiagonal and companion eigenvalues, RK4,
//!   and an extended-precision scalar for oracle checks.
//! * [`dynamics`]: vector field, fixed points, stability scans, trajectories.
//! * [`hamiltonics`]: position-dependent-mass Hamiltonian, the canonical map to
//!   a sextic oscillator and the gauge reduction of its Schrödinger equation.
//! * [`bdpoly`]: Bender–Dunne energy polynomials, the QES condition, critical
//!   spectra and the table reproduction report.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bdpoly;
pub mod dynamics;
mod error;
pub mod hamiltonics;
pub mod numerics;

pub use error::{Error, Result};
