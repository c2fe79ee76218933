use thiserror::Error;

use crate::fan::FanError;
use crate::format::FormatError;
use crate::hull::HullError;
use crate::linalg::LinalgError;
use crate::newton::NewtonError;
use crate::oracle::OracleError;
use crate::pushforward::PushError;
use crate::symmetry::SymmetryError;

/// Any error the library can report, tagged by the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Push(#[from] PushError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Error::Linalg(e) => e.variant_name(),
            Error::Fan(e) => e.variant_name(),
            Error::Push(e) => e.variant_name(),
            Error::Newton(e) => e.variant_name(),
            Error::Symmetry(e) => e.variant_name(),
            Error::Hull(e) => e.variant_name(),
            Error::Oracle(e) => e.variant_name(),
            Error::Format(e) => e.variant_name(),
            Error::Io { .. } => "Io",
            Error::Usage(_) => "Usage",
        }
    }
}
