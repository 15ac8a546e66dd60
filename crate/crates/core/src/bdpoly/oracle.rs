//! Independent check on critical-polynomial roots.
//!
//! The monic critical polynomial is expanded in extended precision from the
//! uncentred recursion, seeded with the double-precision companion roots and
//! polished by Newton's method in the same precision. A root is certified
//! when the polynomial changes sign across a relative window of `1e-12`
//! around it. Nothing here touches the tridiagonal route.

use super::spectrum::companion_energies;
use crate::dynamics::ModelParams;
use crate::numerics::Ext;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRoot {
    pub value: f64,
    pub seed: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub bits: usize,
    pub roots: Vec<OracleRoot>,
}

impl OracleSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn all_certified(&self) -> bool {
        self.roots.iter().all(|r| r.certified)
    }
}

/// Monic `P^_J` coefficients (ascending) in `bits` of precision.
fn expand_monic_ext(p: &ModelParams, j: u32, bits: usize) -> Vec<Ext> {
    let a = Ext::from_f64(p.a, bits);
    let b = Ext::from_f64(p.b, bits);
    let g = Ext::from_f64(p.g, bits);
    let int = |v: i64| Ext::from_i64(v, bits);
    let g2 = &g * &g;
    let g3 = &g2 * &g;
    let g4 = &g2 * &g2;
    let g5 = &g4 * &g;
    let base = &b / &g - &a / &g3;
    let shift = int(3) / int(2) * (int(2) * &a / &g).sqrt();
    let s_2a_g5 = (int(2) * &a / &g5).sqrt();

    let mut prev: Vec<Ext> = Vec::new();
    let mut cur: Vec<Ext> = vec![int(1)];
    for n in 1..=j as i64 {
        let bn = &base - int(n - 1) * &shift;
        // c_n = -C_n g^4 / 256 with C_n = 128 (n-1)(n-2)(n-J-1) sqrt(2a/g^5)
        let cn = -(int(128 * (n - 1) * (n - 2) * (n - j as i64 - 1)) * &s_2a_g5 * &g4 / int(256));
        let mut next = vec![int(0); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &bn * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] = &next[k] - &cn * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn horner(coeffs: &[Ext], x: &Ext) -> (Ext, Ext) {
    let bits = x.bits();
    let mut v = Ext::zero(bits);
    let mut d = Ext::zero(bits);
    for c in coeffs.iter().rev() {
        d = &d * x + &v;
        v = &v * x + c;
    }
    (v, d)
}

pub fn extended_roots(p: &ModelParams, j: u32, bits: usize) -> Result<OracleSpectrum> {
    if bits < 64 {
        return Err(Error::BadParams(format!(
            "extended precision needs at least 64 bits (got {bits})"
        )));
    }
    let coeffs = expand_monic_ext(p, j, bits);
    let seeds = companion_energies(p, j)?;
    let window = Ext::from_f64(1e-12, bits);
    let roots = seeds
        .into_iter()
        .map(|seed| {
            let mut x = Ext::from_f64(seed, bits);
            for _ in 0..(bits / 8).max(16) {
                let (v, d) = horner(&coeffs, &x);
                if d.is_zero() {
                    break;
                }
                let step = &v / &d;
                x = &x - &step;
                let rel = (&step / &x.abs().max_one()).abs();
                if rel.to_f64() < 2f64.powi(-(bits as i32) + 8) {
                    break;
                }
            }
            let delta = &x.abs().max_one() * &window;
            let (lo, _) = horner(&coeffs, &(&x - &delta));
            let (hi, _) = horner(&coeffs, &(&x + &delta));
            let certified = lo.is_negative() != hi.is_negative() || lo.is_zero() || hi.is_zero();
            OracleRoot {
                value: x.to_f64(),
                seed,
                certified,
            }
        })
        .collect::<Vec<_>>();
    let mut roots = roots;
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(OracleSpectrum { bits, roots })
}

trait MaxOne {
    fn max_one(self) -> Ext;
}

impl MaxOne for Ext {
    fn max_one(self) -> Ext {
        let one = Ext::from_i64(1, self.bits());
        if self < one {
            one
        } else {
            self
        }
    }
}
