//! Shared numerical kernels.

mod extended;
mod poly;
mod tridiag;

pub use extended::{Ext, DEFAULT_EXT_BITS};
pub use poly::{poly_roots, Poly};
pub use tridiag::{eig_symmetric_tridiagonal, TriDiag};

use crate::{Error, Result};

/// A sign-change bracket shrunk around a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    /// Re-checks that `f` changes sign (or vanishes) across the bracket.
    pub fn certifies<F: Fn(f64) -> f64>(&self, f: F) -> bool {
        f(self.lo) * f(self.hi) <= 0.0 && self.lo <= self.root && self.root <= self.hi
    }
}

/// Bisection down to `tol`, then a few derivative-free Newton steps that are
/// only accepted while they stay inside the bracket and reduce `|f|`.
pub fn find_root_bracketed<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootBracket> {
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DegenerateInput("bracket must be finite with tol > 0"));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(RootBracket { root: lo, lo, hi: lo });
    }
    if fhi == 0.0 {
        return Ok(RootBracket { root: hi, lo: hi, hi });
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoSignChange { lo, hi });
    }

    // 200 halvings exhaust any f64 bracket
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(RootBracket {
                root: mid,
                lo: mid,
                hi: mid,
            });
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }

    let mut root = 0.5 * (lo + hi);
    let mut froot = f(root);
    for _ in 0..3 {
        let h = (hi - lo).max(f64::EPSILON * root.abs().max(1.0));
        let slope = (f(root + h) - f(root - h)) / (2.0 * h);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = root - froot / slope;
        if !(lo..=hi).contains(&next) {
            break;
        }
        let fnext = f(next);
        if fnext.abs() >= froot.abs() {
            break;
        }
        root = next;
        froot = fnext;
    }
    Ok(RootBracket { root, lo, hi })
}

/// One classical fourth-order Runge–Kutta step of an autonomous field.
pub fn rk4_step<const N: usize, F>(f: F, s: &[f64; N], dt: f64) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let axpy = |k: &[f64; N], h: f64| -> [f64; N] {
        let mut out = *s;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += h * ki;
        }
        out
    };
    let k1 = f(s);
    let k2 = f(&axpy(&k1, 0.5 * dt));
    let k3 = f(&axpy(&k2, 0.5 * dt));
    let k4 = f(&axpy(&k3, dt));
    let mut next = *s;
    for i in 0..N {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(Error::NonFiniteState { t: f64::NAN })
    }
}

/// Central-difference derivative with step `h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bracketed_sqrt2() {
        let r = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(r.root, std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert!(r.hi - r.lo <= 1e-12);
        assert!(r.certifies(|x| x * x - 2.0));
    }

    #[test]
    fn bracketed_odd_function() {
        let r = find_root_bracketed(|x| x, -1.0, 1.0, 1e-14).unwrap();
        assert_eq!(r.root, 0.0);
    }

    #[test]
    fn bracketed_qes_condition_j1() {
        let (a, b) = (2.0 / 3.0, 1.0);
        let f = |g: f64| (3.0 * a - 4.0 * b * g * g) - 2.0 * (2.0 * a * g.powi(5)).sqrt();
        let r = find_root_bracketed(f, 0.1, 0.7, 1e-13).unwrap();
        assert!((r.root - 0.58865).abs() < 1e-5, "{}", r.root);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn rk4_zero_field_is_identity() {
        let s = [0.3, -1.7];
        assert_eq!(rk4_step(|_| [0.0, 0.0], &s, 0.25).unwrap(), s);
    }

    #[test]
    fn rk4_constant_field() {
        let next = rk4_step(|_| [1.0, 0.0], &[0.0, 0.0], 0.5).unwrap();
        assert_eq!(next, [0.5, 0.0]);
    }

    #[test]
    fn rk4_exponential() {
        let next = rk4_step(|s: &[f64; 1]| [s[0]], &[1.0], 0.1).unwrap();
        assert!((next[0] - 1.105_170_83).abs() < 1e-7);
        // local error is O(dt^5): 0.1^5/120 ~ 8.5e-8
        assert!((next[0] - 0.1f64.exp()).abs() < 1e-7);
    }

    #[test]
    fn rk4_flags_blow_up() {
        let err = rk4_step(|s: &[f64; 1]| [s[0] * s[0] * 1e300], &[1e10], 1.0).unwrap_err();
        assert!(matches!(err, Error::NonFiniteState { .. }));
    }
}
