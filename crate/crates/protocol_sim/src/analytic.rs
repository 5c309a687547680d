//! Closed-form target states and leading-order success probabilities.

use fock_core::{coherent_overlap, FockVector, TruncationSpec};
use num_complex::Complex64;
use scheme_design::{semi_success_coeffs, EliminationRoots, TargetCoefficients};

use crate::error::Result;

/// Unnormalized `Σ_n c_n |αe^{iχn}⟩_a |βe^{iχn}⟩_b`.
pub fn coherent_pair_superposition(
    coeffs: &[Complex64],
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    trunc: TruncationSpec,
) -> Result<FockVector> {
    let mut acc = vec![Complex64::new(0.0, 0.0); trunc.dim() * trunc.dim()];
    for (n, cn) in coeffs.iter().enumerate() {
        let rot = Complex64::from_polar(1.0, chi * n as f64);
        let term = FockVector::coherent_product(&["a", "b"], &[alpha * rot, beta * rot], trunc)?;
        for (slot, v) in acc.iter_mut().zip(term.amplitudes()) {
            *slot += cn * v;
        }
    }
    Ok(FockVector::new(&["a", "b"], acc, trunc)?)
}

/// Normalized target state `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩`.
pub fn analytic_target_state(
    target: &TargetCoefficients,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    trunc: TruncationSpec,
) -> Result<FockVector> {
    Ok(coherent_pair_superposition(target.coeffs(), alpha, beta, chi, trunc)?.normalized())
}

/// Exact squared norm `‖Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩‖²` from coherent overlaps.
pub fn target_norm_sqr(coeffs: &[Complex64], alpha: Complex64, beta: Complex64, chi: f64) -> f64 {
    let rot = |n: usize| Complex64::from_polar(1.0, chi * n as f64);
    let mut total = Complex64::new(0.0, 0.0);
    for (m, cm) in coeffs.iter().enumerate() {
        for (n, cn) in coeffs.iter().enumerate() {
            let ov = coherent_overlap(alpha * rot(m), alpha * rot(n)) * coherent_overlap(beta * rot(m), beta * rot(n));
            total += cm.conj() * cn * ov;
        }
    }
    total.re
}

/// Normalized state left when the listed detectors (1-based) stay silent.
pub fn semi_success_state(
    roots: &EliminationRoots,
    missing: &[usize],
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    trunc: TruncationSpec,
) -> Result<FockVector> {
    let coeffs = semi_success_coeffs(roots, missing)?;
    Ok(coherent_pair_superposition(&coeffs, alpha, beta, chi, trunc)?.normalized())
}

/// Leading-order all-click probability `(q²|γ|²)^K / |c_K|²` with the coefficients
/// rescaled so that the target state has unit norm.
pub fn success_probability_ideal(
    target: &TargetCoefficients,
    gamma: Complex64,
    q: f64,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
) -> f64 {
    let k = target.k();
    let norm_sqr = target_norm_sqr(target.coeffs(), alpha, beta, chi);
    if norm_sqr <= 0.0 {
        return 0.0;
    }
    let ck_sqr = target.coeffs()[k].norm_sqr() / norm_sqr;
    (q * q * gamma.norm_sqr()).powi(k as i32) / ck_sqr
}
