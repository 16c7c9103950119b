use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("DMU index {index} out of range for {count} DMUs")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("degenerate DMU '{id}': {reason}")]
    DegenerateDmu { id: String, reason: String },
    #[error("delta {0} outside [-1, 1]")]
    DeltaOutOfRange(f64),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("{message} (row {row}, column {column})")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl DeaError {
    /// True for failures caused by the numbers rather than the request:
    /// solver breakdown or a violated monotonicity assumption.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            DeaError::Inconsistency(_) | DeaError::Lp(LpError::NumericFailure(_))
        )
    }
}

pub type Result<T, E = DeaError> = std::result::Result<T, E>;
