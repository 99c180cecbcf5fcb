use thiserror::Error;

/// Failures raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the domain of an operation, or an evaluation path
    /// that is not defined for the requested model.
    #[error("domain: {0}")]
    Domain(String),

    /// An adaptive engine exhausted its budget before meeting tolerance.
    #[error("convergence: {what} (estimate {value:e}, error {error:e} after {subdivisions} subdivisions)")]
    Convergence {
        what: String,
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    /// Peak-dependent quantity requested where the coarse scan found no interior maximum.
    #[error("no interior peak for omega_T z = {omega_t_z}")]
    NoPeak { omega_t_z: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Convergence { .. } => "convergence",
            Error::NoPeak { .. } => "no_peak",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
