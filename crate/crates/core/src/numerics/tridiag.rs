use crate::{Error, Result};
use serde::Serialize;

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriDiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TriDiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        let ok = if diag.is_empty() {
            offdiag.is_empty()
        } else {
            offdiag.len() + 1 == diag.len()
        };
        if !ok {
            return Err(Error::MalformedTriDiag {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// All eigenvalues of `m`, ascending.
///
/// Implicit QL with Wilkinson shifts; eigenvalues only.
pub fn eig_symmetric_tridiagonal(m: &TriDiag) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NoConvergence);
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..mm).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}
