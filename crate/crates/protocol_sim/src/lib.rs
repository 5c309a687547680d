//! End-to-end simulation of coherent-state entanglement generation by cross-Kerr
//! interaction with a weak probe followed by an elimination measurement.
//!
//! Two independent paths are provided:
//!
//! * [`run_full_protocol`] simulates everything in the Fock basis: the Kerr
//!   interactions, the probe beamsplitter cascade with explicitly generated
//!   reference beams, on/off detection of every click pattern and the discarding
//!   of all auxiliary modes. [`run_displacement_protocol`] is the cheaper variant
//!   with displaced detector arms instead of reference beams.
//! * [`operator_path_state`] applies the elimination operators `(ĉ − γ_j)^{n_j}`
//!   directly to the probe and maps the rest with the leftover-probe superoperator;
//!   [`oracle_equivalence`] compares both paths.
//!
//! [`analytic`] holds the closed-form target states and the leading-order
//! success probability; [`checks`] verifies the elimination principle on
//! photon-added coherent states.

pub mod analytic;
pub mod checks;
mod error;
pub mod network;
pub mod operator;
mod params;

pub use analytic::{
    analytic_target_state, coherent_pair_superposition, semi_success_state, success_probability_ideal, target_norm_sqr,
};
pub use checks::{pacs_annihilation_norm, pacs_split_joint_click, photon_added_coherent};
pub use error::{ProtocolError, Result};
pub use network::{
    detector_modes, elimination_soundness, kerr_state, probe_click_probabilities, probe_components, probe_tail_tol,
    reference_beams, run_displacement_protocol, run_full_protocol, OutcomeRecord, ProbeComponent,
};
pub use operator::{
    count_patterns, elimination_operator, operator_path_final_state, operator_path_final_state_with_roots,
    operator_path_pure_term, operator_path_state, operator_path_sum_with_roots, oracle_equivalence, residual_scaling,
    OracleReport, DEFAULT_N_CUT,
};
pub use params::{Preset, ProtocolParams, MAIN_TAIL_TOL};
