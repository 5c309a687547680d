use fock_core::FockError;
use scheme_design::SchemeError;
use thiserror::Error;

/// Errors raised by the protocol simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    /// A physical or numerical parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The network cutoff could not be raised far enough to contain the state.
    #[error("network cutoff {n_max} still overflows; amplitudes are too large to simulate densely")]
    CutoffExhausted { n_max: usize },
}

pub type Result<T> = std::result::Result<T, ProtocolError>;
