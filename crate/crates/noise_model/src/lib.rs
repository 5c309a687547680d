//! Nonideal operation of the Kerr-mediated entanglement protocol.
//!
//! * [`NoiseParams`]: channel, Kerr-medium and storage losses, probe dephasing,
//!   Kerr-strength errors, detector efficiency and dark counts.
//! * [`CoeffPairState`]: mixed states over coherent-pair kets, on which the
//!   stage maps act exactly ([`apply_m0`], [`apply_discrete_phase_channel`],
//!   [`apply_chi_error`], [`dark_count_mixture`]).
//! * [`fidelity_leading_order`]: six-term first-order infidelity breakdown;
//!   [`pipeline_fidelity`] evaluates the full chain of maps without expansion.
//! * [`feasibility_check`] and [`ReachSetup`]: parameter requirements for a
//!   fidelity budget and the success probability versus channel loss.

mod channels;
mod error;
mod feasibility;
mod fidelity;
mod pair_state;
mod params;

pub use channels::{
    apply_chi_error, apply_discrete_phase_channel, apply_m0, compensate_roots, discrete_phase_weights, eta2_parts,
    eta_params, DISCRETE_PHASE_WEIGHT_FLOOR,
};
pub use error::{NoiseError, Result};
pub use feasibility::{
    attenuation_db, epsilon_for_fidelity, feasibility_check, loss_from_db, max_channel_loss, reference_target,
    success_vs_fidelity, Condition, Detector, FeasibilityReport, ReachPoint, ReachSetup, DEFAULT_GAMMA_SQ_CAP,
    FIBER_LOSS_DB_PER_KM,
};
pub use fidelity::{
    chi_error_term, dark_count_mixture, darkcount_term, discrete_phase_term, fidelity_leading_order, label_spread,
    normalized_target, pipeline_fidelity, pipeline_state, success_probability, FidelityBreakdown,
    DISCRETE_PHASE_CROSSOVER, SMALL_TERM_LIMIT,
};
pub use pair_state::{CoeffPairState, PairKet, PairVector};
pub use params::NoiseParams;
