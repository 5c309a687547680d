use entanglement::EntanglementError;
use fock_core::FockError;
use noise_model::NoiseError;
use protocol_sim::ProtocolError;
use scheme_design::SchemeError;
use thiserror::Error;

/// Failures of a `kerrgen` run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags or physical parameters (exit 2).
    #[error("invalid configuration: {0}")]
    Config(String),
    /// The detection scheme could not be synthesized (exit 3).
    #[error("scheme synthesis failed: {0}")]
    Synthesis(String),
    /// A Fock-space cutoff could not hold the state (exit 4).
    #[error("truncation overflow: {0}")]
    Truncation(String),
    /// The entanglement optimizer did not converge for some grid points (exit 5).
    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Synthesis(_) => 3,
            CliError::Truncation(_) => 4,
            CliError::NonConvergence(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::RootResidual { .. } => CliError::Synthesis(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::TruncationOverflow { .. } | FockError::TailTooHeavy { .. } => {
                CliError::Truncation(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match &e {
            ProtocolError::Fock(f) => f.clone().into(),
            ProtocolError::Scheme(s) => s.clone().into(),
            ProtocolError::CutoffExhausted { .. } => CliError::Truncation(e.to_string()),
            ProtocolError::InvalidParameter(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<EntanglementError> for CliError {
    fn from(e: EntanglementError) -> Self {
        match e {
            EntanglementError::Fock(f) => f.into(),
            EntanglementError::Scheme(s) => s.into(),
            EntanglementError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<NoiseError> for CliError {
    fn from(e: NoiseError) -> Self {
        match e {
            NoiseError::Scheme(s) => s.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}
