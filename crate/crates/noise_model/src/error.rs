use scheme_design::SchemeError;
use thiserror::Error;

/// Errors raised by the noise model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, NoiseError>;
