use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SipError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("policy infeasible: {quantity} = {value} is outside its admissible range")]
    PolicyInfeasible { quantity: &'static str, value: f64 },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("no iteration qualified for the weighted average (B is empty)")]
    EmptyB,

    #[error("grid of {points_per_axis} points per axis has no point inside the index set")]
    InfeasibleGrid { points_per_axis: usize },
}

pub type Result<T> = std::result::Result<T, SipError>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SipError::DimensionMismatch { expected, got })
    }
}
