use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid, parameter, or scheme configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A malformed or out-of-range entry in a config file.
    #[error("line {line}: key `{key}`: {message}")]
    Parse {
        line: usize,
        key: String,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("size mismatch: expected {expected} values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    /// The per-cell modulus integrator gave up.
    #[error("modulus integration failed at cell {cell} (modulus {modulus:e}, reached t = {reached:e} of {span:e})")]
    Integration {
        cell: usize,
        modulus: f64,
        reached: f64,
        span: f64,
    },

    /// An iterative solver did not converge.
    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("non-finite state detected at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("ratio undefined for the zero field")]
    UndefinedRatio,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("scenario `{name}` failed: {reason}")]
    Scenario { name: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
