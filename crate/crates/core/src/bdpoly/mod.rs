//! Bender–Dunne energy polynomials of the sextic oscillator.
//!
//! Substituting `eta = sum P_n(E) Q^(2n) / (4^n n! (n-1)!)` into the reduced
//! equation gives a three-term recursion in the energy `E`. When the QES
//! condition holds for a positive integer `J`, the coupling `C_{J+1}`
//! vanishes, `P_J` divides every higher polynomial and its zeros are the
//! quasi-exact levels.

mod eta;
mod oracle;
mod recursion;
mod spectrum;
mod table;

pub use eta::{eta_series, EtaBranch, EtaSeries, TRUNCATION_THRESHOLD};
pub use oracle::{extended_roots, OracleRoot, OracleSpectrum};
pub use recursion::{
    build_recursion, compare_flavors, critical_polynomial, flavor_equivalence, solve_qes_g, Branch, CriticalPolynomial,
    Flavor, FlavorComparison, FlavorReport, Recursion, RecursionStep, FLAVOR_EQUIVALENCE_TOL,
};
pub use spectrum::{
    closed_forms, companion_energies, companion_roots, factorization_check, factorization_residual, jacobi_matrix,
    monic_scale, reality_certificate, spectrum, structural_root, tridiagonal_energies, Method, QESSpectrum,
    SpectrumDiagnostics, DEFAULT_K_MAX,
};
pub use table::{
    reproduce_table, DiscrepancyReport, EntryReport, EntryVerdict, PublishedRow, RowReport, RowVerdict,
    ENERGY_TOLERANCE, G_TOLERANCE, ORACLE_TOLERANCE, PUBLISHED_G_BOUND, PUBLISHED_TABLE,
};
