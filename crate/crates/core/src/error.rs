use std::path::PathBuf;

use crate::chain::InvariantViolation;
use crate::dataset::DatasetError;
use crate::grid::GridError;
use crate::limits::SizeLimitError;
use crate::oracle::OracleError;
use crate::rational::ParseRationalError;
use crate::tmod::TModError;
use crate::upsilon::UpsilonError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    SizeLimit(#[from] SizeLimitError),
    #[error("internal invariant violated: {0}")]
    Invariant(#[from] InvariantViolation),
    #[error(transparent)]
    TMod(#[from] TModError),
    #[error(transparent)]
    Upsilon(#[from] UpsilonError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse classification, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    CapExceeded,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SizeLimit(_) | Error::Oracle(OracleError::SizeLimit(_) | OracleError::TooLarge { .. }) => {
                ErrorKind::CapExceeded
            }
            Error::Dataset(DatasetError::Oracle(OracleError::SizeLimit(_))) => ErrorKind::CapExceeded,
            Error::Invariant(_)
            | Error::TMod(TModError::NoFreeSummand(_))
            | Error::Upsilon(_)
            | Error::Oracle(OracleError::NonMonomialPivot) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }
}
