//! Synthesis of the elimination-measurement network that turns the weakly
//! entangled probe state into a chosen superposition
//! `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩`.
//!
//! The pipeline is: target coefficients → roots `γ_j` of
//! `Σ c_n (x/γ)ⁿ = 0` → cascade transmittances `T_j` and splitting fraction `q`
//! → reference amplitudes `γ̃_j` → reference-splitting network `(T′_j, φ_j, γ̃)`.
//! [`design_scheme`] runs all of it; [`DetectionScheme`] serializes to JSON.

mod error;
mod network;
mod phi;
mod roots;
mod scheme;
mod target;

pub use error::{Result, SchemeError};
pub use network::{
    angles, cascade_outputs, cascade_residual, probe_output, reference_amplitudes, transmittances, ReferenceNetwork,
};
pub use phi::{phi_vector, semi_success_coeffs, semi_success_coeffs_single, PhiVector};
pub use roots::{design_poly, poly_derivative, poly_eval, solve_roots, EliminationRoots, Root, MERGE_TOL_REL};
pub use scheme::{design_scheme, DetectionScheme, DEFAULT_DELTA};
pub use target::{coeffs_from_photon_target, poly_from_roots, TargetCoefficients};
