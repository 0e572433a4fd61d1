use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_EXTRAPOLATION: u8 = 4;
pub const EXIT_NO_CONVERGENCE: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Domain(arcwidom::Error),

    #[error("extrapolation residual {residual:e} exceeds {limit:e}")]
    Extrapolation { residual: f64, limit: f64 },

    #[error("{0}")]
    NoConvergence(String),
}

impl From<arcwidom::Error> for CliError {
    fn from(e: arcwidom::Error) -> Self {
        match e {
            arcwidom::Error::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            arcwidom::Error::InvalidWeight(_) => CliError::Parse(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
