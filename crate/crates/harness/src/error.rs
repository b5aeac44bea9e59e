use sip_csa::SipError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// The experiment description is unusable; maps to exit status 2.
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),

    #[error("all {seeds} seeds failed; first failure: {first}")]
    AllSeedsFailed { seeds: usize, first: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Sip(#[from] SipError),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::InvalidSpec(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
