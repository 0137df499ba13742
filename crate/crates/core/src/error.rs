use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The integrated coupling norm drifted beyond the allowed bound.
    #[error("integration failed: relative norm drift {drift:.3e} at step {step} (t = {time}) exceeds {limit:.1e}")]
    Integration {
        step: usize,
        time: f64,
        drift: f64,
        limit: f64,
    },

    #[error("degenerate ground space: gap {gap:.3e} below {threshold:.1e}")]
    Degenerate { gap: f64, threshold: f64 },

    #[error("dense oracle limited to {max} sites, got {requested}")]
    Resource { requested: usize, max: usize },

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
