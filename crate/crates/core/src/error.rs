use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The state lies outside the region where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("computation error: {0}")]
    Computation(String),

    #[error("integration failed at t = {t:.6} days: {reason}")]
    Integration { t: f64, reason: IntegrationFailure },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// One entry per offending field.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntegrationFailure {
    StepLimit(usize),
    StepUnderflow(f64),
    Positivity { compartment: &'static str, value: f64 },
    NonFinite,
    Rhs(String),
}

impl std::fmt::Display for IntegrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntegrationFailure::StepLimit(n) => write!(f, "step limit of {n} exceeded"),
            IntegrationFailure::StepUnderflow(h) => write!(f, "step size underflow (h = {h:e})"),
            IntegrationFailure::Positivity { compartment, value } => {
                write!(f, "compartment {compartment} became negative ({value:e}) beyond round-off")
            }
            IntegrationFailure::NonFinite => f.write_str("non-finite state"),
            IntegrationFailure::Rhs(msg) => f.write_str(msg),
        }
    }
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Validation(_) | Error::Parse(_) | Error::Io { .. } => 1,
            Error::Domain(_) | Error::Computation(_) | Error::Integration { .. } | Error::Solver(_) => 2,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }
}
