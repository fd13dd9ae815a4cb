use thiserror::Error;

/// Failure modes shared by every module. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// A tolerance target was missed; `estimate` is the best value obtained.
    #[error("accuracy error: {what} (estimate {estimate:e}, error {err:e})")]
    Accuracy { what: String, estimate: f64, err: f64 },
    #[error("singular point: {0}")]
    Singularity(String),
    #[error("stability error: {0}")]
    Stability(String),
    #[error("io error at {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn accuracy(what: impl Into<String>, estimate: f64, err: f64) -> Self {
        Error::Accuracy { what: what.into(), estimate, err }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } => 2,
            Error::Accuracy { .. } | Error::Stability(_) => 3,
            Error::Domain(_) | Error::Singularity(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
