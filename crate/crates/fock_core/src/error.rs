use thiserror::Error;

/// Errors raised by truncated Fock-space constructions and operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    /// A coherent amplitude carries more probability above `n_max` than allowed.
    #[error(
        "coherent amplitude |z| = {abs:.6} leaves tail mass {tail:.3e} above n_max = {n_max} \
         (tolerance {tol:.3e})"
    )]
    TailTooHeavy {
        abs: f64,
        n_max: usize,
        tail: f64,
        tol: f64,
    },
    /// A gate pushed more probability past the cutoff than the tolerance allows.
    #[error("truncation overflow: {leak:.3e} probability leaked above n_max = {n_max} (tolerance {tol:.3e})")]
    TruncationOverflow { leak: f64, n_max: usize, tol: f64 },
    /// The named mode does not exist in the state.
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    /// Two operands have incompatible modes, truncation or dimensions.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Truncation parameters violate their invariants.
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
