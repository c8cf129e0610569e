use thiserror::Error;

use crate::lie::LieError;
use crate::literal::LiteralError;
use crate::normalize::NormalizeError;
use crate::poisson::PoissonError;
use crate::pvb::PvbError;
use crate::scalar::ScalarParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("variable-count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
}

/// Any library failure, for callers that do not care which layer raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Pvb(#[from] PvbError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}
