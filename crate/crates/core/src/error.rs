use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix that must be positive semidefinite has a materially negative eigenvalue.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),

    /// More users and targets than the array can resolve in beamspace.
    #[error("{paths} users+targets exceed the beamspace resolution of {antennas} antennas")]
    InsufficientResolution { paths: usize, antennas: usize },

    #[error("exhaustive search refused for N = {0} (limit {1})")]
    SearchTooLarge(usize, usize),

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: &str, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl Error {
    /// Process exit status for the CLI: 2 for I/O failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}
