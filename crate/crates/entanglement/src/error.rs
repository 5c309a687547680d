use fock_core::FockError;
use scheme_design::SchemeError;
use thiserror::Error;

use crate::entropy::EntanglementReport;

/// Errors raised by the entanglement computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    /// Argument outside the domain of the function (e.g. binary entropy outside (0, 1)).
    #[error("argument {0} is outside the domain (0, 1)")]
    DomainError(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// No restart converged within the iteration budget; carries the best point found.
    #[error("optimizer did not converge (best entropy found {:.6} bits)", best.entropy)]
    NonConvergence { best: Box<EntanglementReport> },
}

pub type Result<T> = std::result::Result<T, EntanglementError>;
