//! Exact linear algebra for multimode bosonic states in a truncated Fock basis.
//!
//! States are dense complex arrays over a uniform per-mode photon-number cutoff.
//! All operations are pure functions returning new values, so states can be
//! shared freely across threads.
//!
//! * [`TruncationSpec`] fixes the cutoff and how much coherent-state probability
//!   it may discard; [`coherent_amplitudes`] builds `Q_n(z)`.
//! * [`FockVector`] holds pure states; [`DensOp`] and [`MixedState`] hold mixed ones.
//! * Gates: cross-Kerr phase, beamsplitter, displacement, phase shift, arbitrary
//!   single-mode operators; detector projections via [`project_click`].
//! * Metrics: overlaps, fidelities, trace distance, von Neumann entropy.

mod densop;
mod error;
mod gates;
mod state;
mod trunc;

pub use densop::{
    discard_mode, discard_modes, entropy_bits, fidelity, fidelity_pure, hermitian_eigen, partial_trace, psd_sqrt,
    reshape_bipartite, schmidt_entropy, trace_distance, von_neumann_entropy, DensOp, MixedState,
};
pub use error::{FockError, Result};
pub use gates::{
    annihilation, apply_beamsplitter, apply_cross_kerr, apply_displacement, apply_phase, apply_single_mode, creation,
    displacement_matrix, project_click,
};
pub use num_complex::Complex64;
pub use state::{inner, FockVector};
pub use trunc::{coherent_amplitudes, coherent_amplitudes_unchecked, coherent_overlap, coherent_tail, TruncationSpec};
