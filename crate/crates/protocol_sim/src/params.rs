//! Protocol parameters and the standard parameter presets.

use fock_core::TruncationSpec;
use num_complex::Complex64;
use scheme_design::{coeffs_from_photon_target, design_scheme, DetectionScheme, TargetCoefficients, DEFAULT_DELTA};

use crate::error::{ProtocolError, Result};

/// Admissible truncated probability per coherent state in the two main modes.
pub const MAIN_TAIL_TOL: f64 = 1e-12;

/// Everything needed to run one protocol instance.
#[derive(Debug, Clone)]
pub struct ProtocolParams {
    /// Coherent amplitude of mode `a`.
    pub alpha: Complex64,
    /// Coherent amplitude of mode `b`.
    pub beta: Complex64,
    /// Probe amplitude `γ` of mode `c`.
    pub gamma: Complex64,
    /// Cross-Kerr phase per photon pair (radians).
    pub chi: f64,
    pub target: TargetCoefficients,
    pub scheme: DetectionScheme,
    /// Cutoff of the main modes `a`, `b` (and of `c` in the three-mode state).
    pub trunc: TruncationSpec,
}

impl ProtocolParams {
    /// Designs the detection scheme for `target` and picks the main-mode cutoff.
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        chi: f64,
        target: TargetCoefficients,
        delta: f64,
    ) -> Result<Self> {
        let scheme = design_scheme(&target, gamma, delta)?;
        let trunc = TruncationSpec::for_amplitude(alpha.norm().max(beta.norm()).max(gamma.norm()), MAIN_TAIL_TOL)?;
        Self::with_scheme(alpha, beta, gamma, chi, target, scheme, trunc)
    }

    /// Uses an already synthesized scheme; validates the parameter ranges.
    pub fn with_scheme(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        chi: f64,
        target: TargetCoefficients,
        scheme: DetectionScheme,
        trunc: TruncationSpec,
    ) -> Result<Self> {
        if !(chi > 0.0 && chi <= std::f64::consts::PI) {
            return Err(ProtocolError::InvalidParameter(format!(
                "chi must lie in (0, π], got {chi}"
            )));
        }
        if scheme.k() != target.k() {
            return Err(ProtocolError::InvalidParameter(format!(
                "scheme has {} detectors but the target needs {}",
                scheme.k(),
                target.k()
            )));
        }
        if (scheme.gamma() - gamma).norm() > 1e-12 * gamma.norm().max(1.0) {
            return Err(ProtocolError::InvalidParameter(
                "scheme was designed for a different probe amplitude".into(),
            ));
        }
        if gamma.norm_sqr() > 0.5 {
            log::warn!(
                "|γ|² = {:.3} > 0.5: the weak-probe expansion is unreliable",
                gamma.norm_sqr()
            );
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            chi,
            target,
            scheme,
            trunc,
        })
    }

    pub fn k(&self) -> usize {
        self.target.k()
    }

    /// Same setup with a different probe amplitude (the scheme is re-synthesized).
    pub fn with_gamma(&self, gamma: Complex64) -> Result<Self> {
        Self::new(
            self.alpha,
            self.beta,
            gamma,
            self.chi,
            self.target.clone(),
            self.scheme.delta,
        )
    }
}

/// Named parameter sets used by the tests, the acceptance suite and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// One detector, maximally entangled qubit-type state: `|α|² = |β|² = 10`,
    /// `|α|²χ² = 1`.
    BellK1,
    /// Two detectors, low-distinguishability optimum: `|α|² = |β|² = 10`, `|α|²χ² = 1e-4`.
    QutritLow,
    /// Two detectors, high-distinguishability optimum: `|α|² = |β|² = 25`, `|α|²χ² = 100`.
    QutritHigh,
    /// Two detectors, photon-number-correlated target with `s = 2`, `χ = 1`, `α = β = 0.1`.
    PhotonK2,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::BellK1, Preset::QutritLow, Preset::QutritHigh, Preset::PhotonK2];

    pub fn name(self) -> &'static str {
        match self {
            Preset::BellK1 => "bell-k1",
            Preset::QutritLow => "qutrit-low",
            Preset::QutritHigh => "qutrit-high",
            Preset::PhotonK2 => "photon-k2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// `(|α|², χ)` of the preset (`α = β` real).
    pub fn intensity_and_chi(self) -> (f64, f64) {
        match self {
            Preset::BellK1 => (10.0, (1.0f64 / 10.0).sqrt()),
            Preset::QutritLow => (10.0, (1e-4f64 / 10.0).sqrt()),
            Preset::QutritHigh => (25.0, 2.0),
            Preset::PhotonK2 => (0.01, 1.0),
        }
    }

    pub fn target(self) -> TargetCoefficients {
        let (a2, chi) = self.intensity_and_chi();
        match self {
            Preset::BellK1 => TargetCoefficients::bell_k1(a2, a2, chi),
            Preset::QutritLow => TargetCoefficients::maxent_k2_low(a2, a2, chi),
            Preset::QutritHigh => TargetCoefficients::maxent_k2_high(a2, a2, chi),
            Preset::PhotonK2 => coeffs_from_photon_target(2, 2, chi).expect("valid photon-number target"),
        }
    }

    /// Protocol parameters with probe amplitude `gamma` (real) and the default `δ`.
    pub fn params(self, gamma: f64) -> Result<ProtocolParams> {
        self.params_with(gamma, DEFAULT_DELTA)
    }

    pub fn params_with(self, gamma: f64, delta: f64) -> Result<ProtocolParams> {
        let (a2, chi) = self.intensity_and_chi();
        let a = Complex64::new(a2.sqrt(), 0.0);
        ProtocolParams::new(a, a, Complex64::new(gamma, 0.0), chi, self.target(), delta)
    }
}
