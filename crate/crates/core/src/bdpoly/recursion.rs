use crate::dynamics::ModelParams;
use crate::numerics::{find_root_bracketed, Poly};
use crate::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Sign choice in the QES condition relating `g` and `J`.
///
/// * `Table`: `3a - 4b g^2 = 2(2J-1) sqrt(2a g^5)`, satisfied by the
///   tabulated couplings, `0 < g < sqrt(3a/4b)`.
/// * `Printed`: `4b g^2 - 3a = 2(2J-1) sqrt(2a g^5)`, under which the
///   physical recursion truncates, `g > sqrt(3a/4b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Table,
    Printed,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Table => "table",
            Branch::Printed => "printed",
        }
    }

    /// Left minus right side of the branch condition.
    pub fn condition(self, j: u32, a: f64, b: f64, g: f64) -> f64 {
        let lhs = 3.0 * a - 4.0 * b * g * g;
        let rhs = 2.0 * (2.0 * j as f64 - 1.0) * (2.0 * a * g.powi(5)).sqrt();
        match self {
            Branch::Table => lhs - rhs,
            Branch::Printed => -lhs - rhs,
        }
    }

    /// The branch `g` satisfies to `rel_tol`, relative to the term sizes.
    pub fn detect(j: u32, a: f64, b: f64, g: f64, rel_tol: f64) -> Option<Branch> {
        let scale = 3.0 * a + 4.0 * b.abs() * g * g + 2.0 * (2.0 * j as f64 - 1.0) * (2.0 * a * g.powi(5)).sqrt();
        [Branch::Table, Branch::Printed]
            .into_iter()
            .find(|br| br.condition(j, a, b, g).abs() <= rel_tol * scale)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Branch::Table),
            "printed" => Ok(Branch::Printed),
            other => Err(Error::BadParams(format!("unknown branch '{other}'"))),
        }
    }
}

/// All positive couplings `g` solving the QES condition on `branch`,
/// ascending.
pub fn solve_qes_g(j: u32, a: f64, b: f64, branch: Branch) -> Result<Vec<f64>> {
    if j == 0 || !(a > 0.0) || !(b > 0.0) {
        return Err(Error::BadParams(format!(
            "need J >= 1, a > 0, b > 0 (got J={j}, a={a}, b={b})"
        )));
    }
    let f = |g: f64| branch.condition(j, a, b, g);
    let g0 = (3.0 * a / (4.0 * b)).sqrt();
    let tol = 4.0 * f64::EPSILON;
    match branch {
        Branch::Table => {
            // strictly decreasing from 3a at g = 0 to a negative value at g0
            let r = find_root_bracketed(f, 0.0, g0, tol * g0)?;
            Ok(vec![r.root])
        }
        Branch::Printed => {
            // beyond g_cap the bracket g^2 (4b - c sqrt(g)) - 3a stays negative
            let c = 2.0 * (2.0 * j as f64 - 1.0) * (2.0 * a).sqrt();
            let g_cap = (4.0 * b / c).powi(2);
            if g_cap <= g0 {
                return Err(Error::NoRoot {
                    j,
                    branch: branch.label(),
                });
            }
            const CELLS: usize = 4096;
            let h = (g_cap - g0) / CELLS as f64;
            let mut roots = Vec::new();
            let mut lo = g0;
            let mut flo = f(lo);
            for i in 1..=CELLS {
                let hi = if i == CELLS { g_cap } else { g0 + h * i as f64 };
                let fhi = f(hi);
                if flo * fhi < 0.0 || (fhi == 0.0 && i < CELLS) {
                    roots.push(find_root_bracketed(f, lo, hi, tol * hi)?.root);
                }
                lo = hi;
                flo = fhi;
            }
            if roots.is_empty() {
                return Err(Error::NoRoot {
                    j,
                    branch: branch.label(),
                });
            }
            Ok(roots)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Recursion obtained directly from the series substitution.
    Physical,
    /// The same recursion with the QES condition eliminated in favour of `J`.
    Truncating,
}

/// One step `P_n = (A_n E + B_n) P_{n-1} + C_n P_{n-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecursionStep {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Coefficient generator for the Bender–Dunne energy polynomials, seeded
/// with `P_{-1} = 0`, `P_0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recursion {
    pub params: ModelParams,
    pub flavor: Flavor,
    pub j: Option<u32>,
    sqrt_2a_g5: f64,
}

pub fn build_recursion(p: &ModelParams, j: Option<u32>, flavor: Flavor) -> Result<Recursion> {
    if !(p.g > 0.0) || !(p.a > 0.0) {
        return Err(Error::BadParams(format!(
            "need g > 0 and a > 0 (got g={}, a={})",
            p.g, p.a
        )));
    }
    if flavor == Flavor::Truncating && !matches!(j, Some(j) if j >= 1) {
        return Err(Error::BadParams("truncating recursion needs J >= 1".into()));
    }
    Ok(Recursion {
        params: *p,
        flavor,
        j,
        sqrt_2a_g5: (2.0 * p.a / p.g.powi(5)).sqrt(),
    })
}

impl Recursion {
    pub fn a_coef(&self) -> f64 {
        -16.0 / (self.params.g * self.params.g)
    }

    pub fn b_coef(&self, n: u32) -> f64 {
        let ModelParams { a, b, g } = self.params;
        -16.0 * (a / g.powi(5) - b / g.powi(3)) - 24.0 * (n as f64 - 1.0) * self.sqrt_2a_g5
    }

    pub fn c_coef(&self, n: u32) -> f64 {
        let ModelParams { a, b, g } = self.params;
        let nn = n as f64;
        let pair = (nn - 1.0) * (nn - 2.0);
        match self.flavor {
            Flavor::Physical => {
                let bracket = 4.0 * b * g * g - 3.0 * a - 2.0 * (2.0 * nn - 3.0) * (2.0 * a * g.powi(5)).sqrt();
                -32.0 / g.powi(5) * pair * bracket
            }
            Flavor::Truncating => {
                let j = self.j.unwrap_or(0) as f64;
                128.0 * pair * (nn - j - 1.0) * self.sqrt_2a_g5
            }
        }
    }

    /// Magnitude of the terms entering `C_n`; the natural scale for
    /// comparing `C_n` across flavors.
    pub fn c_term_scale(&self, n: u32) -> f64 {
        let ModelParams { a, b, g } = self.params;
        let nn = n as f64;
        let pair = ((nn - 1.0) * (nn - 2.0)).abs();
        let physical = 32.0 / g.powi(5)
            * (4.0 * b.abs() * g * g + 3.0 * a + 2.0 * (2.0 * nn - 3.0).abs() * (2.0 * a * g.powi(5)).sqrt());
        let truncating = 128.0 * (nn - self.j.unwrap_or(0) as f64 - 1.0).abs() * self.sqrt_2a_g5;
        pair * physical.max(truncating)
    }

    pub fn step(&self, n: u32) -> RecursionStep {
        RecursionStep {
            n,
            a: self.a_coef(),
            b: self.b_coef(n),
            c: self.c_coef(n),
        }
    }

    pub fn steps(&self, depth: u32) -> Vec<RecursionStep> {
        (1..=depth).map(|n| self.step(n)).collect()
    }

    /// `P_n(E)` by forward recursion.
    pub fn eval(&self, n: u32, e: f64) -> f64 {
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 1..=n {
            let next = (self.a_coef() * e + self.b_coef(k)) * cur + self.c_coef(k) * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Diagonal entry of the monic recursion, `-B_n / A_n`
    /// `= b/g - a/g^3 - (3/2)(n-1) sqrt(2a/g)`.
    pub fn monic_b(&self, n: u32) -> f64 {
        let ModelParams { a, b, g } = self.params;
        b / g - a / g.powi(3) - 1.5 * (n as f64 - 1.0) * (2.0 * a / g).sqrt()
    }

    /// Coupling of the monic recursion, `-C_n / A_n^2 = -C_n g^4 / 256`.
    pub fn monic_c(&self, n: u32) -> f64 {
        -self.c_coef(n) * self.params.g.powi(4) / 256.0
    }

    /// `P_n(E) / A^n` by the monic forward recursion
    /// `P^_n = (E - b_n) P^_{n-1} - c_n P^_{n-2}`.
    pub fn eval_monic(&self, n: u32, e: f64) -> f64 {
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 1..=n {
            let next = (e - self.monic_b(k)) * cur - self.monic_c(k) * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Expanded `P_n(E)`.
    pub fn expand(&self, n: u32) -> Poly {
        let (mut prev, mut cur) = (Poly::zero(), Poly::one());
        for k in 1..=n {
            let ak = self.a_coef();
            // (A E + B) P = A (E - (-B/A)) P
            let next = cur
                .mul_linear(-self.b_coef(k) / ak)
                .scale(ak)
                .add_scaled(&prev, self.c_coef(k));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Expanded monic `P^_n` in the variable `z = (E - center) / scale`,
    /// normalized to leading coefficient 1.
    pub fn expand_monic_scaled(&self, n: u32, center: f64, scale: f64) -> Poly {
        let (mut prev, mut cur) = (Poly::zero(), Poly::one());
        for k in 1..=n {
            let shift = (self.monic_b(k) - center) / scale;
            let next = cur
                .mul_linear(shift)
                .add_scaled(&prev, -self.monic_c(k) / (scale * scale));
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Critical polynomial `P_J` in raw and monic normalization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPolynomial {
    pub j: u32,
    pub raw: Poly,
    pub monic: Poly,
}

pub fn critical_polynomial(rec: &Recursion, j: u32) -> Result<CriticalPolynomial> {
    if rec.flavor != Flavor::Truncating {
        return Err(Error::BadParams(
            "critical polynomial needs the truncating recursion".into(),
        ));
    }
    let raw = rec.expand(j);
    let monic = raw.monic();
    Ok(CriticalPolynomial { j, raw, monic })
}

/// Physical vs truncating `C_n` at one coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlavorComparison {
    pub g: f64,
    pub branch: Branch,
    /// Largest `|C_n^phys - C_n^trunc|` relative to the `C_n` term scale,
    /// over `1 <= n <= J + 5`.
    pub max_rel_deviation: f64,
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlavorReport {
    pub j: u32,
    pub printed: Vec<FlavorComparison>,
    pub table: FlavorComparison,
}

pub const FLAVOR_EQUIVALENCE_TOL: f64 = 1e-10;

pub fn compare_flavors(p: &ModelParams, j: u32, branch: Branch) -> Result<FlavorComparison> {
    let phys = build_recursion(p, Some(j), Flavor::Physical)?;
    let trunc = build_recursion(p, Some(j), Flavor::Truncating)?;
    let max_rel_deviation = (1..=j + 5)
        .map(|n| {
            let scale = trunc.c_term_scale(n);
            if scale == 0.0 {
                0.0
            } else {
                (phys.c_coef(n) - trunc.c_coef(n)).abs() / scale
            }
        })
        .fold(0.0, f64::max);
    Ok(FlavorComparison {
        g: p.g,
        branch,
        max_rel_deviation,
        equivalent: max_rel_deviation <= FLAVOR_EQUIVALENCE_TOL,
    })
}

/// Compares the two recursion flavors at every printed-branch root (if any)
/// and at the table-branch root.
pub fn flavor_equivalence(a: f64, b: f64, j: u32) -> Result<FlavorReport> {
    if j == 0 {
        return Err(Error::BadParams("J must be >= 1".into()));
    }
    let printed = match solve_qes_g(j, a, b, Branch::Printed) {
        Ok(gs) => gs
            .into_iter()
            .map(|g| compare_flavors(&ModelParams { a, b, g }, j, Branch::Printed))
            .collect::<Result<_>>()?,
        Err(Error::NoRoot { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    let g_table = solve_qes_g(j, a, b, Branch::Table)?[0];
    let table = compare_flavors(&ModelParams { a, b, g: g_table }, j, Branch::Table)?;
    Ok(FlavorReport { j, printed, table })
}
