//! Discrimination vector `|φ⟩_c` and semi-successful coefficient sets.

use fock_core::{coherent_amplitudes_unchecked, FockVector, Result as FockResult, TruncationSpec};
use num_complex::Complex64;

use crate::error::{Result, SchemeError};
use crate::roots::EliminationRoots;
use crate::target::{poly_from_roots, TargetCoefficients};

/// Unnormalized Fock components `(c_n*/Q_n*(γ))`, `n = 0..=K`, of the vector that
/// must be told apart from every eliminated probe state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiVector {
    pub components: Vec<Complex64>,
}

impl PhiVector {
    /// Embeds the vector into a single-mode Fock space with the given cutoff.
    pub fn to_fock(&self, mode: &str, trunc: TruncationSpec) -> FockResult<FockVector> {
        let mut amps = vec![Complex64::new(0.0, 0.0); trunc.dim()];
        for (slot, v) in amps.iter_mut().zip(&self.components) {
            *slot = *v;
        }
        FockVector::new(&[mode], amps, trunc)
    }
}

/// Builds `|φ⟩_c ∝ Σ_n (c_n*/Q_n*(γ)) |n⟩_c`.
pub fn phi_vector(target: &TargetCoefficients, gamma: Complex64) -> Result<PhiVector> {
    if gamma.norm() == 0.0 {
        return Err(SchemeError::InvalidParameter(
            "probe amplitude gamma must be nonzero".into(),
        ));
    }
    let q = coherent_amplitudes_unchecked(gamma, target.k());
    Ok(PhiVector {
        components: target.coeffs().iter().zip(&q).map(|(c, qn)| (c / qn).conj()).collect(),
    })
}

/// Coefficients (ascending powers) of `Π_{m ∉ missing}(x − γ_m/γ)`: the coherent-pair
/// expansion of the state left when the listed detectors (1-based, with roots
/// counted by multiplicity in detector order) stay silent.
pub fn semi_success_coeffs(roots: &EliminationRoots, missing: &[usize]) -> Result<Vec<Complex64>> {
    let k = roots.k();
    if let Some(&bad) = missing.iter().find(|&&m| m == 0 || m > k) {
        return Err(SchemeError::InvalidParameter(format!(
            "detector index {bad} outside 1..={k}"
        )));
    }
    let kept: Vec<Complex64> = roots
        .expanded()
        .iter()
        .enumerate()
        .filter(|(j, _)| !missing.contains(&(j + 1)))
        .map(|(_, r)| r / roots.gamma)
        .collect();
    Ok(poly_from_roots(&kept))
}

/// Single-silent-detector coefficients by the explicit sum
/// `c̃_n = Σ_{m≤n} c_m / (c_K (γ_{n₁}/γ)^{n+1−m})`, `n = 0..K−1`.
pub fn semi_success_coeffs_single(target: &TargetCoefficients, root_over_gamma: Complex64) -> Vec<Complex64> {
    let c = target.coeffs();
    let k = target.k();
    (0..k)
        .map(|n| {
            (0..=n)
                .map(|m| c[m] / (c[k] * root_over_gamma.powi((n + 1 - m) as i32)))
                .sum()
        })
        .collect()
}
