//! Entanglement entropy of `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩` in the coherent span.

use fock_core::{entropy_bits, psd_sqrt};
use nalgebra::DMatrix;
use num_complex::Complex64;
use scheme_design::{semi_success_coeffs, EliminationRoots, TargetCoefficients};

use crate::error::{EntanglementError, Result};
use crate::gram::GramPair;

/// Gram eigenvalues below this are treated as zero when taking `G^{1/2}`
/// (nearly coalescent coherent states make `G` ill-conditioned).
pub const GRAM_EIGEN_FLOOR: f64 = 1e-14;

/// Entropy of a two-mode pure state with its Schmidt spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    /// Von Neumann entropy of either reduced state (bits).
    pub entropy: f64,
    /// Schmidt probabilities, descending, summing to one.
    pub schmidt: Vec<f64>,
    /// Optimal coefficients (gauge `c_0 = 1`) when the report comes from an optimization.
    pub c_opt: Option<Vec<Complex64>>,
}

/// Schmidt probabilities of `Σ c_n |a_n⟩|b_n⟩` for Gram matrices `G_a`, `G_b`.
///
/// With `|a_n⟩ = Σ_k (G_a^{1/2})_{kn} |e_k⟩` in an orthonormal basis of the span,
/// the coefficient matrix is `M = G_a^{1/2} diag(c) (G_b^{1/2})ᵀ`; its squared
/// singular values (normalized) are the Schmidt probabilities.
pub fn schmidt_probabilities(gram: &GramPair, c: &[Complex64]) -> Result<Vec<f64>> {
    if c.len() != gram.dim() {
        return Err(EntanglementError::InvalidParameter(format!(
            "{} coefficients for {} coherent pairs",
            c.len(),
            gram.dim()
        )));
    }
    let sa = psd_sqrt(&gram.g_a, GRAM_EIGEN_FLOOR);
    let sb = psd_sqrt(&gram.g_b, GRAM_EIGEN_FLOOR);
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(c));
    let m = sa * diag * sb.transpose();
    let sv = m.singular_values();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    if total <= 0.0 {
        return Err(EntanglementError::InvalidParameter("state has zero norm".into()));
    }
    let mut p: Vec<f64> = sv.iter().map(|s| s * s / total).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    Ok(p)
}

/// Entropy report for explicit coefficients.
pub fn entropy_of_coeffs(gram: &GramPair, c: &[Complex64]) -> Result<EntanglementReport> {
    let schmidt = schmidt_probabilities(gram, c)?;
    Ok(EntanglementReport {
        entropy: entropy_bits(&schmidt),
        schmidt,
        c_opt: None,
    })
}

/// Entanglement of the target state `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩`.
pub fn entropy_of_target(
    target: &TargetCoefficients,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
) -> Result<EntanglementReport> {
    let gram = GramPair::new(alpha, beta, chi, target.k());
    entropy_of_coeffs(&gram, target.coeffs())
}

/// Entanglement of the state left when the listed detectors (1-based) stay silent.
pub fn semi_success_entropy(
    roots: &EliminationRoots,
    missing: &[usize],
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
) -> Result<EntanglementReport> {
    let c = semi_success_coeffs(roots, missing)?;
    let gram = GramPair::new(alpha, beta, chi, c.len() - 1);
    entropy_of_coeffs(&gram, &c)
}

/// Binary entropy `h(x) = −x log₂x − (1−x) log₂(1−x)` on `(0, 1)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(EntanglementError::DomainError(x));
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Leading-order entanglement `h(χ²|α|²|γ|²)` created between mode `a` and the
/// rest by the weak Kerr interaction with the probe.
pub fn weak_entanglement_estimate(alpha: Complex64, gamma: Complex64, chi: f64) -> Result<f64> {
    binary_entropy(chi * chi * alpha.norm_sqr() * gamma.norm_sqr())
}
