//! `qesdyn` command-line front end.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit status is 0
//! on success, 1 on usage errors and 2 on numerical failure.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{to_json, Cell, Csv};
use qesdyn::bdpoly::{self, Branch, EtaBranch, Flavor, Method};
use qesdyn::dynamics::{self, ModelParams, PhaseState, DEFAULT_A, DEFAULT_B};
use qesdyn::hamiltonics;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "qesdyn",
    version,
    about = "Classical dynamics and QES spectra of the quadratic PT oscillator"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Top,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Cubic coefficient of V(x) = a x^3 - b x
    #[arg(long, global = true, default_value_t = DEFAULT_A, allow_negative_numbers = true)]
    a: f64,
    /// Linear coefficient of V(x) = a x^3 - b x
    #[arg(long, global = true, default_value_t = DEFAULT_B, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum BranchArg {
    Table,
    Printed,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Table => Branch::Table,
            BranchArg::Printed => Branch::Printed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Tri,
    Companion,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Tri => Method::Tridiagonal,
            MethodArg::Companion => Method::Companion,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Top {
    /// Classical phase-plane dynamics
    Dyn {
        #[command(subcommand)]
        cmd: DynCmd,
    },
    /// Canonical map and gauge identities
    Canon {
        #[command(subcommand)]
        cmd: CanonCmd,
    },
    /// Quasi-exactly solvable spectra
    Qes {
        #[command(subcommand)]
        cmd: QesCmd,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "name")]
enum DynCmd {
    /// Fixed points and their stability at one coupling
    FixedPoints {
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        /// Also list non-real fixed points (unclassified)
        #[arg(long)]
        include_complex: bool,
    },
    /// Stability of every real fixed point over a g grid
    Scan {
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        g_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        g_max: f64,
        /// Number of grid points, endpoints included
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Fixed-step RK4 trajectory
    Integrate {
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        /// Emit every n-th sample
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "name")]
enum CanonCmd {
    /// Determinant, pullback and gauge checks
    Check {
        #[arg(long)]
        g: f64,
        /// Random phase-space samples for the determinant
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random Q samples for the potential pullback
        #[arg(long, default_value_t = 1000)]
        pullback_samples: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "name")]
enum QesCmd {
    /// Couplings at which level J is quasi-exactly solvable
    G {
        #[arg(long = "J", visible_alias = "j")]
        j: u32,
        #[arg(long, value_enum, default_value_t = BranchArg::Table)]
        branch: BranchArg,
    },
    /// QES energies at one coupling
    Spectrum {
        #[arg(long = "J", visible_alias = "j")]
        j: u32,
        /// Defaults to the smallest root of the branch condition
        #[arg(long)]
        g: Option<f64>,
        #[arg(long, value_enum, default_value_t = BranchArg::Table)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Tri)]
        method: MethodArg,
    },
    /// Recompute the published table and flag disagreements
    Table {
        #[arg(long, default_value_t = 10)]
        j_max: u32,
        /// Also write the per-entry CSV here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Factorization, reality, recursion flavors and eta series
    Verify {
        #[arg(long = "J", visible_alias = "j")]
        j: u32,
        #[arg(long)]
        g: Option<f64>,
        #[arg(long, value_enum, default_value_t = BranchArg::Table)]
        branch: BranchArg,
        #[arg(long, default_value_t = bdpoly::DEFAULT_K_MAX)]
        k_max: u32,
        /// Highest eta coefficient index
        #[arg(long, default_value_t = 24)]
        eta_terms: usize,
    },
}

enum Failure {
    Usage(String),
    Numerical(qesdyn::Error),
}

impl From<qesdyn::Error> for Failure {
    fn from(e: qesdyn::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e)
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serialization: {e}"))
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// What one run produced: the main payload plus optional side files.
struct Emitted {
    body: String,
    side: Vec<(PathBuf, String)>,
    /// Numerical failure discovered after the data was assembled.
    late_failure: Option<qesdyn::Error>,
}

impl Emitted {
    fn body(body: String) -> Self {
        Self {
            body,
            side: Vec::new(),
            late_failure: None,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a Cli,
    method: &'a str,
    result: T,
}

fn json<T: Serialize>(cli: &Cli, method: &str, result: T) -> Run<String> {
    Ok(to_json(&Envelope {
        config: cli,
        method,
        result,
    })?)
}

fn params(cli: &Cli, g: f64) -> Run<ModelParams> {
    Ok(ModelParams::new(cli.global.a, cli.global.b, g)?)
}

fn csv_unsupported(what: &str) -> Failure {
    Failure::Usage(format!("--format csv is not available for {what}"))
}

fn scan_row(c: &mut Csv, g: f64, fp: &str, re: f64, im: f64, class: &str) {
    c.row(&[Cell::F(g), Cell::S(fp), Cell::F(re), Cell::F(im), Cell::S(class)]);
}

const SCAN_HEADER: [&str; 5] = ["g", "fp", "re_lambda", "im_lambda", "class"];

fn run_dyn(cli: &Cli, cmd: &DynCmd) -> Run<Emitted> {
    let csv = cli.global.format == Format::Csv;
    match *cmd {
        DynCmd::FixedPoints { g, include_complex } => {
            let p = params(cli, g)?;
            let fps = dynamics::fixed_points(&p, include_complex);
            if csv {
                let mut c = Csv::new(&SCAN_HEADER);
                for fp in &fps {
                    let l = fp.eigenvalues[0];
                    scan_row(&mut c, g, fp.family.label(), l.re, l.im, fp.class.label());
                }
                return Ok(Emitted::body(c.finish()));
            }
            #[derive(Serialize)]
            struct Out<'a> {
                g: f64,
                real_count: usize,
                fixed_points: &'a [dynamics::FixedPointReport],
            }
            let real_count = fps.iter().filter(|f| f.real_location().is_some()).count();
            Ok(Emitted::body(json(
                cli,
                "analytic_jacobian",
                Out {
                    g,
                    real_count,
                    fixed_points: &fps,
                },
            )?))
        }
        DynCmd::Scan { g_min, g_max, steps } => {
            let rows = dynamics::bifurcation_scan(cli.global.a, cli.global.b, g_min, g_max, steps)?;
            if csv {
                let mut c = Csv::new(&SCAN_HEADER);
                for r in &rows {
                    scan_row(&mut c, r.g, r.family.label(), r.re_lambda, r.im_lambda, r.class.label());
                }
                return Ok(Emitted::body(c.finish()));
            }
            Ok(Emitted::body(json(cli, "analytic_jacobian", rows)?))
        }
        DynCmd::Integrate {
            g,
            x0,
            y0,
            dt,
            t_max,
            every,
        } => {
            if every == 0 {
                return Err(Failure::Usage("--every must be >= 1".into()));
            }
            let p = params(cli, g)?;
            let mut tr = dynamics::integrate(&p, PhaseState::new(x0, y0), dt, t_max)?;
            let late_failure = tr.failure.clone();
            let drift = tr.max_energy_drift();
            let last = tr.samples.len().saturating_sub(1);
            tr.samples = tr
                .samples
                .into_iter()
                .enumerate()
                .filter(|(i, _)| i % every == 0 || *i == last)
                .map(|(_, s)| s)
                .collect();
            let body = if csv {
                let mut c = Csv::new(&["t", "x", "y", "H"]);
                for s in &tr.samples {
                    c.row(&[Cell::F(s.t), Cell::F(s.x), Cell::F(s.y), Cell::F(s.h)]);
                }
                c.finish()
            } else {
                #[derive(Serialize)]
                struct Out<'a> {
                    max_energy_drift: f64,
                    period: Option<f64>,
                    trajectory: &'a dynamics::Trajectory,
                }
                let period = dynamics::measure_period(&tr).ok();
                json(
                    cli,
                    "rk4",
                    Out {
                        max_energy_drift: drift,
                        period,
                        trajectory: &tr,
                    },
                )?
            };
            Ok(Emitted {
                body,
                side: Vec::new(),
                late_failure,
            })
        }
    }
}

fn run_canon(cli: &Cli, cmd: &CanonCmd) -> Run<Emitted> {
    if cli.global.format == Format::Csv {
        return Err(csv_unsupported("canon check"));
    }
    let CanonCmd::Check {
        g,
        samples,
        seed,
        pullback_samples,
    } = *cmd;
    let p = params(cli, g)?;
    let gauge = hamiltonics::gauge_params(&p)?;
    #[derive(Serialize)]
    struct Identities {
        alpha_beta: f64,
        beta_sq: f64,
    }
    #[derive(Serialize)]
    struct Out {
        max_det_deviation: f64,
        max_pullback_residual: f64,
        gauge: hamiltonics::GaugeParams,
        gauge_identities: Identities,
    }
    let out = Out {
        max_det_deviation: hamiltonics::verify_canonical(&p, samples, seed)?,
        max_pullback_residual: hamiltonics::max_pullback_residual(&p, pullback_samples, seed)?,
        gauge,
        gauge_identities: Identities {
            alpha_beta: gauge.alpha_beta_deviation(&p),
            beta_sq: gauge.beta_sq_deviation(&p),
        },
    };
    Ok(Emitted::body(json(cli, "central_difference", out)?))
}

/// Explicit `g`, or the smallest root of the branch condition.
fn resolve_g(cli: &Cli, j: u32, g: Option<f64>, branch: BranchArg) -> Run<f64> {
    match g {
        Some(g) => Ok(g),
        None => Ok(bdpoly::solve_qes_g(j, cli.global.a, cli.global.b, branch.into())?[0]),
    }
}

#[derive(Serialize)]
struct EtaDiagnostic {
    e_star: f64,
    branch: EtaBranch,
    consistent: bool,
    truncation_index: Option<usize>,
    residual: Option<f64>,
    leading_coeffs: Vec<f64>,
}

impl From<bdpoly::EtaSeries> for EtaDiagnostic {
    fn from(s: bdpoly::EtaSeries) -> Self {
        Self {
            e_star: s.e_star,
            branch: s.branch,
            consistent: s.consistent,
            truncation_index: s.truncation_index,
            residual: s.residual,
            leading_coeffs: s.coeffs.iter().take(6).copied().collect(),
        }
    }
}

fn run_qes(cli: &Cli, cmd: &QesCmd) -> Run<Emitted> {
    let csv = cli.global.format == Format::Csv;
    let (a, b) = (cli.global.a, cli.global.b);
    match *cmd {
        QesCmd::G { j, branch } => {
            if csv {
                return Err(csv_unsupported("qes g"));
            }
            let roots = bdpoly::solve_qes_g(j, a, b, branch.into())?;
            #[derive(Serialize)]
            struct Out {
                j: u32,
                branch: Branch,
                roots: Vec<f64>,
            }
            Ok(Emitted::body(json(
                cli,
                "bisection",
                Out {
                    j,
                    branch: branch.into(),
                    roots,
                },
            )?))
        }
        QesCmd::Spectrum { j, g, branch, method } => {
            if csv {
                return Err(csv_unsupported("qes spectrum"));
            }
            let g = resolve_g(cli, j, g, branch)?;
            let s = bdpoly::spectrum(&params(cli, g)?, j, method.into())?;
            let tag = s.diagnostics.method.label();
            Ok(Emitted::body(json(cli, tag, s)?))
        }
        QesCmd::Table {
            j_max,
            csv: ref csv_path,
        } => {
            let report = bdpoly::reproduce_table(j_max)?;
            let mut c = Csv::new(&["J", "g", "E_index", "E_paper", "E_recomputed", "verdict"]);
            for r in &report.rows {
                for e in &r.entries {
                    c.row(&[
                        Cell::I(r.j.into()),
                        Cell::F(r.g_recomputed),
                        Cell::I(e.index as i64),
                        Cell::F(e.published),
                        Cell::F(e.recomputed),
                        Cell::S(e.verdict.label()),
                    ]);
                }
            }
            let table_csv = c.finish();
            let mut side = Vec::new();
            if let Some(path) = csv_path {
                side.push((path.clone(), table_csv.clone()));
            }
            let body = if csv {
                table_csv
            } else {
                json(cli, report.method.as_str(), &report)?
            };
            Ok(Emitted {
                body,
                side,
                late_failure: None,
            })
        }
        QesCmd::Verify {
            j,
            g,
            branch,
            k_max,
            eta_terms,
        } => {
            if csv {
                return Err(csv_unsupported("qes verify"));
            }
            if eta_terms < 3 {
                return Err(Failure::Usage("--eta-terms must be >= 3".into()));
            }
            let g = resolve_g(cli, j, g, branch)?;
            let p = params(cli, g)?;
            let rec = bdpoly::build_recursion(&p, Some(j), Flavor::Truncating)?;
            let energies = bdpoly::tridiagonal_energies(&p, j)?;
            let mut eta: Vec<EtaDiagnostic> = energies
                .iter()
                .map(|&e| bdpoly::eta_series(&p, e, eta_terms, EtaBranch::Quadratic).map(Into::into))
                .collect::<qesdyn::Result<_>>()?;
            let e0 = bdpoly::structural_root(&p);
            eta.push(bdpoly::eta_series(&p, e0, eta_terms, EtaBranch::Constant)?.into());
            #[derive(Serialize)]
            struct Flavors {
                at_g: bdpoly::FlavorComparison,
                branch_roots: bdpoly::FlavorReport,
            }
            #[derive(Serialize)]
            struct Out {
                j: u32,
                g: f64,
                detected_branch: Option<Branch>,
                energies: Vec<f64>,
                structural_root: f64,
                k_max: u32,
                factorization_max_residual: f64,
                reality_certificate: Option<f64>,
                flavor_equivalence: Flavors,
                eta_diagnostics: Vec<EtaDiagnostic>,
            }
            let out = Out {
                j,
                g,
                detected_branch: Branch::detect(j, a, b, g, 1e-9),
                energies,
                structural_root: e0,
                k_max,
                factorization_max_residual: bdpoly::factorization_check(&p, j, k_max)?,
                reality_certificate: bdpoly::reality_certificate(&rec, j),
                flavor_equivalence: Flavors {
                    at_g: bdpoly::compare_flavors(&p, j, branch.into())?,
                    branch_roots: bdpoly::flavor_equivalence(a, b, j)?,
                },
                eta_diagnostics: eta,
            };
            Ok(Emitted::body(json(cli, "tridiagonal+recursion", out)?))
        }
    }
}

fn write_all(path: Option<&PathBuf>, data: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, data),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Top::Dyn { cmd } => run_dyn(&cli, cmd),
        Top::Canon { cmd } => run_canon(&cli, cmd),
        Top::Qes { cmd } => run_qes(&cli, cmd),
    };
    let emitted = match result {
        Ok(e) => e,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(2);
        }
    };
    for (path, data) in &emitted.side {
        if let Err(e) = write_all(Some(path), data) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if let Err(e) = write_all(cli.global.out.as_ref(), &emitted.body) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if let Some(e) = emitted.late_failure {
        eprintln!("numerical failure: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
