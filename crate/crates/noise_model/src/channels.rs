//! Stage maps of the nonideal protocol in the coherent-pair representation.
//!
//! Kerr-medium loss at both sites, storage loss and probe dephasing all act on
//! the density coefficients the same way, `ρ_{n₁n₂} ↦ ρ_{n₁n₂}
//! e^{iη₁(n₁−n₂) − η₂(n₁−n₂)²}`, and are collected into one map ([`apply_m0`]).
//! Probe photon loss becomes a mixture of discretely phase-rotated copies of
//! mode `a`, and Kerr-strength errors rotate the coherent amplitudes.

use num_complex::Complex64;
use scheme_design::{EliminationRoots, Root};

use crate::pair_state::{CoeffPairState, PairKet};
use crate::params::NoiseParams;

/// Terms of the discrete-phase series below this weight (relative to the
/// largest one) are dropped.
pub const DISCRETE_PHASE_WEIGHT_FLOOR: f64 = 1e-14;

/// Phase drift `η₁` per photon and off-diagonal decay `η₂` of the combined
/// loss/dephasing map, for Kerr strengths `χ_ac`, `χ_bc`:
/// `η₁ = ½Λ₁(|α|²χ_ac + |β|²χ_bc) + |α|²χ_ac Λ₂`,
/// `η₂ = Δφ² + ⅓Λ₁(|α|²χ_ac² + |β|²χ_bc²) + ½|α|²χ_ac² Λ₂`.
pub fn eta_params(noise: &NoiseParams, alpha: Complex64, beta: Complex64, chi_ac: f64, chi_bc: f64) -> (f64, f64) {
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let eta1 = 0.5 * noise.lambda_kerr * (a2 * chi_ac + b2 * chi_bc) + a2 * chi_ac * noise.lambda_storage;
    let eta2 = noise.dphi2
        + noise.lambda_kerr * (a2 * chi_ac * chi_ac + b2 * chi_bc * chi_bc) / 3.0
        + 0.5 * a2 * chi_ac * chi_ac * noise.lambda_storage;
    (eta1, eta2)
}

/// The three separate contributions to `η₂`: probe dephasing, Kerr-medium loss
/// and storage loss.
pub fn eta2_parts(noise: &NoiseParams, alpha: Complex64, beta: Complex64, chi_ac: f64, chi_bc: f64) -> [f64; 3] {
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    [
        noise.dphi2,
        noise.lambda_kerr * (a2 * chi_ac * chi_ac + b2 * chi_bc * chi_bc) / 3.0,
        0.5 * a2 * chi_ac * chi_ac * noise.lambda_storage,
    ]
}

/// Combined loss/dephasing map: `ρ_{n₁n₂} ↦ ρ_{n₁n₂} e^{iη₁(n₁−n₂) − η₂(n₁−n₂)²}`.
pub fn apply_m0(state: &CoeffPairState, eta1: f64, eta2: f64) -> CoeffPairState {
    state.map_coefficients(|n1, n2| {
        let d = n1 as f64 - n2 as f64;
        Complex64::from_polar((-eta2 * d * d).exp(), eta1 * d)
    })
}

/// Kerr-strength errors: `|αe^{iχn}⟩|βe^{iχn}⟩ ↦ |αe^{iχ(1+ε_ac)n}⟩|βe^{iχ(1+ε_bc)n}⟩`.
pub fn apply_chi_error(state: &CoeffPairState, chi: f64, eps_ac: f64, eps_bc: f64) -> CoeffPairState {
    state.map_kets(|k| PairKet {
        a: k.a * Complex64::from_polar(1.0, chi * eps_ac * k.label as f64),
        b: k.b * Complex64::from_polar(1.0, chi * eps_bc * k.label as f64),
        label: k.label,
    })
}

/// Weights `(Λ|γ|²)^m/m!` of the discrete-phase series, truncated below
/// [`DISCRETE_PHASE_WEIGHT_FLOOR`] of the largest term.
pub fn discrete_phase_weights(lambda_channel: f64, gamma: Complex64) -> Vec<f64> {
    let mu = lambda_channel * gamma.norm_sqr();
    if mu <= 0.0 {
        return vec![1.0];
    }
    let mut w = vec![1.0];
    let mut m = 1.0;
    loop {
        let next = w[w.len() - 1] * mu / m;
        let max = w.iter().cloned().fold(0.0, f64::max);
        if next < DISCRETE_PHASE_WEIGHT_FLOOR * max && m > mu {
            break;
        }
        w.push(next);
        m += 1.0;
    }
    w
}

/// Probe photon loss seen from the main modes:
/// `ρ ↦ Σ_m ((Λ|γ|²)^m/m!) e^{iχ_ac m â⁺â} ρ e^{−iχ_ac m â⁺â}`, renormalized by
/// the total weight so that the trace is kept.
pub fn apply_discrete_phase_channel(
    state: &CoeffPairState,
    lambda_channel: f64,
    gamma: Complex64,
    chi_ac: f64,
) -> CoeffPairState {
    let w = discrete_phase_weights(lambda_channel, gamma);
    let total: f64 = w.iter().sum();
    let mut out = state.scaled(w[0] / total);
    for (m, wm) in w.iter().enumerate().skip(1) {
        let rot = Complex64::from_polar(1.0, chi_ac * m as f64);
        let shifted = state.map_kets(|k| PairKet { a: k.a * rot, ..*k });
        out = out.mix(&shifted, wm / total);
    }
    out
}

/// Roots redesigned to pre-compensate the phase drift `η₁`: `γ_j ↦ γ_j e^{iη₁}`.
///
/// The redesigned scheme produces `Σ c_n e^{−iη₁n} |αe^{iχn}⟩|βe^{iχn}⟩`, which
/// [`apply_m0`] with `(η₁, 0)` turns back into the original target.
pub fn compensate_roots(roots: &EliminationRoots, eta1: f64) -> EliminationRoots {
    let rot = Complex64::from_polar(1.0, eta1);
    EliminationRoots {
        roots: roots
            .roots
            .iter()
            .map(|r| Root {
                value: r.value * rot,
                mult: r.mult,
            })
            .collect(),
        gamma: roots.gamma,
    }
}
