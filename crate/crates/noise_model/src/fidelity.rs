//! Fidelity of the generated state under all nonidealities.
//!
//! [`fidelity_leading_order`] gives the six-term first-order breakdown;
//! [`pipeline_fidelity`] applies the complete chain of stage maps to the exact
//! target and evaluates the fidelity without expansion.

use log::warn;
use num_complex::Complex64;
use scheme_design::{semi_success_coeffs, solve_roots, EliminationRoots, TargetCoefficients};

use crate::channels::{
    apply_chi_error, apply_discrete_phase_channel, apply_m0, compensate_roots, eta2_parts, eta_params,
};
use crate::error::{NoiseError, Result};
use crate::pair_state::{CoeffPairState, PairKet, PairVector};
use crate::params::NoiseParams;

/// Leading-order terms larger than this are outside the regime of validity.
pub const SMALL_TERM_LIMIT: f64 = 0.2;

/// Distinguishability range around the regime switch of the discrete-phase term
/// where neither limiting form is accurate.
pub const DISCRETE_PHASE_CROSSOVER: (f64, f64) = (0.3, 3.0);

/// Infidelity contributions of the six kinds of nonideality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityBreakdown {
    /// Probe dephasing (`∝ Δφ²`).
    pub t_dephase: f64,
    /// Loss of the main modes in the Kerr media (`∝ Λ₁`).
    pub t_kerr_loss: f64,
    /// Loss of mode `a` during storage (`∝ Λ₂`).
    pub t_storage: f64,
    /// Kerr-strength errors (`∝ ε²`).
    pub t_chi_err: f64,
    /// Dark counts replacing missing clicks (`∝ ζ`).
    pub t_darkcount: f64,
    /// Probe photon loss as discrete phase errors (`∝ Λ|γ|²`).
    pub t_discrete_phase: f64,
    /// `1 − Σ terms`, clamped to `[0, 1]`.
    pub fidelity: f64,
}

impl FidelityBreakdown {
    pub fn terms(&self) -> [f64; 6] {
        [
            self.t_dephase,
            self.t_kerr_loss,
            self.t_storage,
            self.t_chi_err,
            self.t_darkcount,
            self.t_discrete_phase,
        ]
    }

    /// `Σ terms` (not clamped).
    pub fn total_infidelity(&self) -> f64 {
        self.terms().iter().sum()
    }
}

/// Normalized target `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩` and its `|c_K|²` after normalization.
pub fn normalized_target(
    target: &TargetCoefficients,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
) -> Result<(PairVector, f64)> {
    let psi = PairVector::superposition(target.coeffs(), alpha, beta, chi).normalized()?;
    let ck = psi.amps[target.k()].norm_sqr();
    Ok((psi, ck))
}

/// One-run success probability with detector efficiency `λ`:
/// `p_K = (q²λ|γ|²)^K / |c_K|²` (normalized coefficients).
pub fn success_probability(
    target: &TargetCoefficients,
    gamma: Complex64,
    lambda_det: f64,
    q: f64,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
) -> Result<f64> {
    if !(lambda_det > 0.0 && lambda_det <= 1.0) {
        return Err(NoiseError::InvalidParameter(format!(
            "detector efficiency must lie in (0, 1], got {lambda_det}"
        )));
    }
    let (_, ck) = normalized_target(target, alpha, beta, chi)?;
    Ok((q * q * lambda_det * gamma.norm_sqr()).powi(target.k() as i32) / ck)
}

/// Spread of the coefficient label in the normalized state: `‖Ψ⁽¹⁾‖² − |⟨Ψ|Ψ⁽¹⁾⟩|²`
/// with `Ψ⁽¹⁾ = Σ n c_n |αe^{iχn}⟩|βe^{iχn}⟩`. The combined loss/dephasing map
/// costs `2η₂` times this.
pub fn label_spread(psi: &PairVector) -> f64 {
    let psi1 = psi.label_power(1);
    psi1.norm_sqr() - psi.inner(&psi1).norm_sqr()
}

/// `(a₁*a₂, b₁*b₂)`: the photon-number matrix elements of two coherent kets
/// divided by their overlap.
fn number_factors(k1: &PairKet, k2: &PairKet) -> (Complex64, Complex64) {
    (k1.a.conj() * k2.a, k1.b.conj() * k2.b)
}

/// Infidelity caused by Kerr-strength errors `Δχ = εχ` at each site:
/// `‖P_⊥ X Ψ⁽¹⁾‖² = ⟨Ψ⁽¹⁾|X²|Ψ⁽¹⁾⟩ − |⟨Ψ|X|Ψ⁽¹⁾⟩|²` with
/// `X = Δχ_ac â⁺â + Δχ_bc b̂⁺b̂`, for the normalized target.
pub fn chi_error_term(
    target: &TargetCoefficients,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    eps_ac: f64,
    eps_bc: f64,
) -> Result<f64> {
    let (psi, _) = normalized_target(target, alpha, beta, chi)?;
    let psi1 = psi.label_power(1);
    let (da, db) = (eps_ac * chi, eps_bc * chi);
    let mut x2 = Complex64::new(0.0, 0.0);
    let mut x1 = Complex64::new(0.0, 0.0);
    for (ki, (vi, v1i)) in psi.kets.iter().zip(psi.amps.iter().zip(&psi1.amps)) {
        for (kj, v1j) in psi1.kets.iter().zip(&psi1.amps) {
            let g = ki.overlap(kj);
            let (sa, sb) = number_factors(ki, kj);
            let sq = da * da * (sa + sa * sa) + 2.0 * da * db * sa * sb + db * db * (sb + sb * sb);
            x2 += v1i.conj() * g * sq * v1j;
            x1 += vi.conj() * g * (da * sa + db * sb) * v1j;
        }
    }
    Ok(x2.re - x1.norm_sqr())
}

fn check_dark_count_regime(zeta: f64, lambda_det: f64, gamma: Complex64) {
    let r = zeta / (lambda_det * gamma.norm_sqr());
    if r > 0.1 {
        warn!("dark-count ratio ζ/(λ|γ|²) = {r:.3e} is not small; the dark-count expansion is unreliable");
    }
}

/// Mixture produced by dark counts standing in for missing clicks (unnormalized):
/// `|Ψ_f⟩⟨Ψ_f| + (ζ/(λ|γ|²))|c_K|² Σ_{n₁}|Ψ(n₁)⟩⟨Ψ(n₁)| + (ζ²/(λ²|γ|⁴))|c_K|² Σ_{n₁<n₂}|Ψ(n₁,n₂)⟩⟨Ψ(n₁,n₂)|`,
/// with `Ψ_f` normalized and `Ψ(…)` the products of the remaining elimination
/// factors applied to `|α⟩|β⟩`. Higher dark-count orders are dropped.
#[allow(clippy::too_many_arguments)]
pub fn dark_count_mixture(
    target: &TargetCoefficients,
    roots: &EliminationRoots,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    gamma: Complex64,
    lambda_det: f64,
    zeta: f64,
) -> Result<CoeffPairState> {
    let (psi, ck) = normalized_target(target, alpha, beta, chi)?;
    let mut rho = psi.projector();
    if zeta == 0.0 {
        return Ok(rho);
    }
    check_dark_count_regime(zeta, lambda_det, gamma);
    let k = roots.k();
    let r = zeta / (lambda_det * gamma.norm_sqr());
    let semi = |missing: &[usize]| -> Result<CoeffPairState> {
        let c = semi_success_coeffs(roots, missing)?;
        Ok(PairVector::superposition(&c, alpha, beta, chi).projector())
    };
    for n1 in 1..=k {
        rho = rho.mix(&semi(&[n1])?, r * ck);
    }
    for n1 in 1..=k {
        for n2 in n1 + 1..=k {
            rho = rho.mix(&semi(&[n1, n2])?, r * r * ck);
        }
    }
    Ok(rho)
}

/// Leading-order dark-count infidelity
/// `(ζ/(λ|γ|²))|c_K|² Σ_{n₁} Tr{P_⊥ |Ψ(n₁)⟩⟨Ψ(n₁)|}`.
#[allow(clippy::too_many_arguments)]
pub fn darkcount_term(
    target: &TargetCoefficients,
    roots: &EliminationRoots,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    gamma: Complex64,
    lambda_det: f64,
    zeta: f64,
) -> Result<f64> {
    if zeta == 0.0 {
        return Ok(0.0);
    }
    let (psi, ck) = normalized_target(target, alpha, beta, chi)?;
    let mut sum = 0.0;
    for n1 in 1..=roots.k() {
        let c = semi_success_coeffs(roots, &[n1])?;
        let v = PairVector::superposition(&c, alpha, beta, chi);
        sum += v.norm_sqr() - psi.inner(&v).norm_sqr();
    }
    Ok(zeta / (lambda_det * gamma.norm_sqr()) * ck * sum)
}

/// Leading-order infidelity from probe photon loss: `|α|²χ²(Λ|γ|² + Λ²|γ|⁴)`
/// for `|α|²χ² < 1` and `Λ|γ|²` above (the limiting forms for weakly and
/// strongly distinguishable coherent states).
pub fn discrete_phase_term(alpha: Complex64, chi: f64, lambda_channel: f64, gamma: Complex64) -> f64 {
    let x = alpha.norm_sqr() * chi * chi;
    let mu = lambda_channel * gamma.norm_sqr();
    if mu > 0.0 && x > DISCRETE_PHASE_CROSSOVER.0 && x < DISCRETE_PHASE_CROSSOVER.1 {
        warn!("|α|²χ² = {x:.3} lies between the limiting regimes; the discrete-phase term is approximate");
    }
    if x < 1.0 {
        x * (mu + mu * mu)
    } else {
        mu
    }
}

/// Six-term leading-order fidelity of the all-click state (the phase drift `η₁`
/// is assumed compensated by the scheme design).
pub fn fidelity_leading_order(
    target: &TargetCoefficients,
    noise: &NoiseParams,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    chi: f64,
) -> Result<FidelityBreakdown> {
    noise.validate()?;
    let (psi, _) = normalized_target(target, alpha, beta, chi)?;
    let spread = label_spread(&psi);
    let (chi_ac, chi_bc) = (chi * (1.0 + noise.eps_ac), chi * (1.0 + noise.eps_bc));
    let [dephase, kerr, storage] = eta2_parts(noise, alpha, beta, chi_ac, chi_bc);
    let roots = solve_roots(target, gamma)?;
    let mut b = FidelityBreakdown {
        t_dephase: 2.0 * dephase * spread,
        t_kerr_loss: 2.0 * kerr * spread,
        t_storage: 2.0 * storage * spread,
        t_chi_err: chi_error_term(target, alpha, beta, chi, noise.eps_ac, noise.eps_bc)?,
        t_darkcount: darkcount_term(target, &roots, alpha, beta, chi, gamma, noise.lambda_det, noise.zeta)?,
        t_discrete_phase: discrete_phase_term(alpha, chi, noise.lambda_channel, gamma),
        fidelity: 0.0,
    };
    if b.terms().iter().any(|&t| t > SMALL_TERM_LIMIT) {
        warn!("an infidelity term exceeds {SMALL_TERM_LIMIT}; the leading-order expansion is unreliable");
    }
    b.fidelity = (1.0 - b.total_infidelity()).clamp(0.0, 1.0);
    Ok(b)
}

/// Final mixed state of the nonideal protocol: dark-count mixture from a scheme
/// pre-compensated for `η₁`, then Kerr-strength errors, probe loss and the
/// combined loss/dephasing map.
pub fn pipeline_state(
    target: &TargetCoefficients,
    noise: &NoiseParams,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    chi: f64,
) -> Result<CoeffPairState> {
    noise.validate()?;
    let (chi_ac, chi_bc) = (chi * (1.0 + noise.eps_ac), chi * (1.0 + noise.eps_bc));
    let (eta1, eta2) = eta_params(noise, alpha, beta, chi_ac, chi_bc);
    let roots = compensate_roots(&solve_roots(target, gamma)?, eta1);
    let k = target.k();
    let lead = target.coeffs()[k];
    let design = TargetCoefficients::new(roots.monic_coefficients().iter().map(|m| m * lead).collect())?;
    let rho = dark_count_mixture(&design, &roots, alpha, beta, chi, gamma, noise.lambda_det, noise.zeta)?;
    let rho = apply_chi_error(&rho, chi, noise.eps_ac, noise.eps_bc);
    let rho = apply_discrete_phase_channel(&rho, noise.lambda_channel, gamma, chi_ac);
    Ok(apply_m0(&rho, eta1, eta2))
}

/// Exact fidelity of [`pipeline_state`] with the ideal normalized target.
pub fn pipeline_fidelity(
    target: &TargetCoefficients,
    noise: &NoiseParams,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    chi: f64,
) -> Result<f64> {
    let rho = pipeline_state(target, noise, alpha, beta, gamma, chi)?;
    let (psi, _) = normalized_target(target, alpha, beta, chi)?;
    Ok(rho.fidelity(&psi))
}
