use thiserror::Error;

/// Errors raised while synthesizing a detection scheme.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    /// The leading coefficient `c_K` vanishes, so the design polynomial has degree < K.
    #[error("leading coefficient c_K is zero; the target needs K >= 1 and c_K != 0")]
    DegenerateLeadingCoefficient,
    /// The coefficient vector is unusable (too short, all zero, non-finite).
    #[error("invalid target coefficients: {0}")]
    InvalidTarget(String),
    /// A design parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The root finder could not meet the residual requirement.
    #[error("root synthesis failed: residual {residual:.3e} exceeds {bound:.3e}")]
    RootResidual { residual: f64, bound: f64 },
    /// Scheme (de)serialization failed.
    #[error("scheme file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SchemeError>;
