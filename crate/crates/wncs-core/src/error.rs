use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library.
///
/// `InvalidInput`, `Config` and `Io` indicate bad user input (the CLI maps
/// them to exit code 2); the remaining variants are runtime failures.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument failed a structural or range validation check
    /// (dimension mismatch, non-positive parameter, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The eigenvalue iteration did not converge or failed its determinant
    /// cross-check. No partial spectrum is ever returned.
    #[error("spectrum not computed: {0}")]
    SpectrumNotComputed(String),

    /// A SIR evaluation saw zero total interference power.
    #[error("undefined SIR: all interferer gains are zero")]
    UndefinedSir,

    /// A mathematical domain violation, e.g. the log singularity at alpha = 0.
    #[error("domain error: {0}")]
    Domain(String),

    /// A config or data file failed schema validation. `at` is the offending
    /// field path ("." for the document root).
    #[error("config error in {} at {at}: {detail}", path.display())]
    Config {
        path: PathBuf,
        at: String,
        detail: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Config { .. } | Error::Io { .. }
        )
    }
}
