//! Direct checks of the elimination principle on photon-added coherent states.

use fock_core::{
    apply_beamsplitter, apply_displacement, apply_single_mode, coherent_tail, creation, FockVector, TruncationSpec,
};
use num_complex::Complex64;

use crate::error::{ProtocolError, Result};
use crate::operator::elimination_operator;

/// Cutoff holding `(ĉ⁺)^s|z⟩` (and `extra` further raisings) to far below 1e-20.
fn pacs_trunc(z: f64, s: usize, extra: usize) -> Result<TruncationSpec> {
    let mut n = 0;
    while coherent_tail(z, n) > 1e-32 {
        n += 1;
    }
    Ok(TruncationSpec::new(n + s + extra + 4, 1e-14)?)
}

/// `(ĉ⁺)^s|z⟩` (unnormalized) in mode `mode`.
pub fn photon_added_coherent(z: Complex64, s: usize, mode: &str, trunc: TruncationSpec) -> Result<FockVector> {
    let mut psi = FockVector::coherent_product(&[mode], &[z], trunc)?;
    let up = creation(trunc.dim());
    for _ in 0..s {
        psi = apply_single_mode(&psi, mode, &up)?;
    }
    Ok(psi)
}

/// Relative norm `‖(ĉ − γ_m)^l (ĉ⁺)^s|γ_m⟩‖ / ‖(ĉ⁺)^s|γ_m⟩‖`; zero whenever `s < l`,
/// which is why an `l`-fold root needs `l` detectors.
pub fn pacs_annihilation_norm(gamma_m: Complex64, s: usize, l: usize) -> Result<f64> {
    let trunc = pacs_trunc(gamma_m.norm(), s, 0)?;
    let psi = photon_added_coherent(gamma_m, s, "c", trunc)?;
    let out = apply_single_mode(&psi, "c", &elimination_operator(trunc.dim(), gamma_m, l, 1.0))?;
    Ok((out.norm_sqr() / psi.norm_sqr()).sqrt())
}

/// Splits `(ĉ⁺)^s|γ⟩` equally over `s+1` modes, displaces every output back to
/// vacuum for the coherent part (`|γ/√(s+1)⟩`-elimination on each arm) and returns
/// the probability that all `s+1` detectors click. The `s` added photons cannot
/// occupy `s+1` modes, so this vanishes.
pub fn pacs_split_joint_click(gamma: Complex64, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(ProtocolError::InvalidParameter("need at least one added photon".into()));
    }
    let trunc = pacs_trunc(gamma.norm(), s, 0)?;
    let names: Vec<String> = (0..=s).map(|k| format!("m{k}")).collect();
    let mut state = photon_added_coherent(gamma, s, "m0", trunc)?;
    let norm = state.norm_sqr();
    let vac = FockVector::vacuum(&names[1..], trunc)?;
    state = state.tensor(&vac)?;
    // Arm k takes 1/(s+2−k) of what is left in m0; the coherent part of each
    // output is then γ/√(s+1) times a known phase.
    let mut amps = vec![Complex64::new(0.0, 0.0); s + 1];
    let mut left = gamma;
    for k in 1..=s {
        let th = (1.0 / (s + 2 - k) as f64).sqrt().asin();
        state = apply_beamsplitter(&state, "m0", &names[k], th)?;
        amps[k] = Complex64::new(0.0, th.sin()) * left;
        left *= th.cos();
    }
    amps[0] = left;
    for (name, a) in names.iter().zip(&amps) {
        state = apply_displacement(&state, name, -a)?;
    }
    let d = trunc.dim();
    let strides: Vec<usize> = (0..=s).map(|i| state.stride(i)).collect();
    let joint: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(f, _)| strides.iter().all(|&st| (f / st) % d != 0))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(joint / norm)
}
