//! Entanglement of two-mode coherent-pair superpositions
//! `Σ_{n=0}^{K} c_n |αe^{iχn}⟩_a |βe^{iχn}⟩_b`.
//!
//! The entropy is computed exactly in the `(K+1)`-dimensional span of the
//! coherent states through their Gram matrices ([`GramPair`]), without any Fock
//! truncation. [`optimize_coefficients`] maximizes it over the coefficients, and
//! [`semi_success_entropy`] evaluates the states left by partially failed
//! elimination measurements.

mod entropy;
mod error;
mod gram;
mod optimize;
mod scan;

pub use entropy::{
    binary_entropy, entropy_of_coeffs, entropy_of_target, schmidt_probabilities, semi_success_entropy,
    weak_entanglement_estimate, EntanglementReport, GRAM_EIGEN_FLOOR,
};
pub use error::{EntanglementError, Result};
pub use gram::{overlap_via_states, rotated_overlap, GramPair};
pub use optimize::{interference_phase_term, optimize_coefficients, optimize_coefficients_with, OptimizerConfig};
pub use scan::{entanglement_scan, ScanRow};
