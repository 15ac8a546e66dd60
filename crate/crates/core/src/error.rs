use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("malformed tridiagonal matrix: {diag} diagonal vs {offdiag} off-diagonal entries")]
    MalformedTriDiag { diag: usize, offdiag: usize },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("fixed point is not real")]
    NonRealFixedPoint,
    #[error("trajectory does not return to its section")]
    NoReturn,
    #[error("canonical map is singular at Q = {q}, g = {g}")]
    SingularMap { q: f64, g: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("no QES root for J = {j} on the {branch} branch")]
    NoRoot { j: u32, branch: &'static str },
    #[error("negative Jacobi coupling c_{n} = {value}: spectrum is not real")]
    NonRealDetected { n: u32, value: f64 },
}

impl Error {
    /// Failures of the numerical problem itself, as opposed to malformed
    /// requests.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::BadParams(_) | Error::MalformedTriDiag { .. })
    }
}

impl Serialize for Error {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
