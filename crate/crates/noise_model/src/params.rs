//! Dimensionless nonideality parameters.

use crate::error::{NoiseError, Result};

/// Nonideality of the channel, the Kerr media, the storage resonator and the detectors.
///
/// Losses are relative intensity losses `Λ = (I₀ − I)/I`; rates and durations
/// enter only through these combinations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    /// Probe channel loss `Λ`.
    pub lambda_channel: f64,
    /// Loss of the main modes during the Kerr interactions `Λ₁` (both sites).
    pub lambda_kerr: f64,
    /// Loss of mode `a` during storage `Λ₂`.
    pub lambda_storage: f64,
    /// Mean-square probe phase error `Δφ²` (rad²).
    pub dphi2: f64,
    /// Detector efficiency `λ ∈ (0, 1]`.
    pub lambda_det: f64,
    /// Dark-count probability `ζ ∈ [0, 1)`.
    pub zeta: f64,
    /// Relative Kerr-strength error at Alice's site `ε_ac = Δχ_ac/χ`.
    pub eps_ac: f64,
    /// Relative Kerr-strength error at Bob's site `ε_bc = Δχ_bc/χ`.
    pub eps_bc: f64,
}

impl NoiseParams {
    /// Ideal system: no losses or errors, perfect detectors.
    pub fn ideal() -> Self {
        Self {
            lambda_det: 1.0,
            ..Self::default()
        }
    }

    /// Checks the parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let losses = [
            ("channel loss", self.lambda_channel),
            ("Kerr loss", self.lambda_kerr),
            ("storage loss", self.lambda_storage),
            ("phase error", self.dphi2),
        ];
        for (name, v) in losses {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(NoiseError::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !(self.lambda_det > 0.0 && self.lambda_det <= 1.0) {
            return Err(NoiseError::InvalidParameter(format!(
                "detector efficiency must lie in (0, 1], got {}",
                self.lambda_det
            )));
        }
        if !(self.zeta >= 0.0 && self.zeta < 1.0) {
            return Err(NoiseError::InvalidParameter(format!(
                "dark-count probability must lie in [0, 1), got {}",
                self.zeta
            )));
        }
        if !(self.eps_ac.is_finite() && self.eps_bc.is_finite()) {
            return Err(NoiseError::InvalidParameter(
                "Kerr-strength errors must be finite".into(),
            ));
        }
        Ok(())
    }
}
