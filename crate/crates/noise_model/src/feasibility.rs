//! Parameter requirements for a target fidelity and the resulting reach.
//!
//! Each of the six infidelity terms is required to stay below `ε` (so
//! `F ≥ 1 − 6ε`). For the maximally entangled `K = 1` and `K = 2` targets at
//! `|α|²χ² ≪ 1` this gives
//!
//! 1. `Λ < 2ε²λ/ζ` (dark counts against probe loss),
//! 2. `Λ₂ < 2ε·f`,
//! 3. `Δφ² < |α|²χ²ε·f`,
//! 4. `Λ₁ < (3/2)ε·f`,
//! 5. `|γ|² < ε/(|α|²χ²Λ)`,
//! 6. `ε_ac², ε_bc² < ε·f/(2|α|²)`,
//!
//! with `f = 1` for `K = 1` and `f = 1/2` for `K = 2`.

use num_complex::Complex64;
use rayon::prelude::*;
use scheme_design::{transmittances, TargetCoefficients, DEFAULT_DELTA};

use crate::error::{NoiseError, Result};
use crate::fidelity::success_probability;
use crate::params::NoiseParams;

/// Attenuation of standard telecom fiber used to convert dB into distance.
pub const FIBER_LOSS_DB_PER_KM: f64 = 0.20;

/// Default cap on the probe intensity `|γ|²`: the protocol analysis holds up
/// to `O(|γ|²)` corrections, so the probe is never made stronger than this even
/// when the channel is lossless.
pub const DEFAULT_GAMMA_SQ_CAP: f64 = 1.0;

/// Detector efficiency `λ` and dark-count probability `ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    pub lambda_det: f64,
    pub zeta: f64,
}

impl Detector {
    /// `λ = 1e-2`, `ζ = 1e-8`.
    pub const LOW_NOISE: Detector = Detector {
        lambda_det: 1e-2,
        zeta: 1e-8,
    };
    /// `λ = 1e-1`, `ζ = 1e-6`.
    pub const HIGH_EFFICIENCY: Detector = Detector {
        lambda_det: 1e-1,
        zeta: 1e-6,
    };
}

/// `10·log₁₀(Λ + 1)`.
pub fn attenuation_db(lambda_channel: f64) -> f64 {
    10.0 * (lambda_channel + 1.0).log10()
}

/// Inverse of [`attenuation_db`].
pub fn loss_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0) - 1.0
}

/// Per-term infidelity budget `ε = (1 − F)/6` for a target fidelity `F`.
pub fn epsilon_for_fidelity(f: f64) -> f64 {
    (1.0 - f) / 6.0
}

/// One requirement with its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    /// Upper bound the value must stay below.
    pub bound: f64,
    pub value: f64,
    /// `bound / value` (infinite for a vanishing value).
    pub margin: f64,
    pub pass: bool,
}

impl Condition {
    fn new(name: &'static str, bound: f64, value: f64) -> Self {
        let margin = if value == 0.0 { f64::INFINITY } else { bound / value };
        Self {
            name,
            bound,
            value,
            margin,
            pass: value < bound,
        }
    }
}

/// Evaluated requirements and the implied maximal channel loss.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub conditions: Vec<Condition>,
    /// Largest acceptable channel loss `2ε²λ/ζ`.
    pub lambda_max: f64,
    /// [`attenuation_db`] of `lambda_max`.
    pub max_attenuation_db: f64,
    /// Fiber length with that attenuation at [`FIBER_LOSS_DB_PER_KM`].
    pub max_distance_km: f64,
}

impl FeasibilityReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

fn check_inputs(eps: f64, k: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0 / 6.0) {
        return Err(NoiseError::InvalidParameter(format!(
            "ε must lie in (0, 1/6), got {eps}"
        )));
    }
    match k {
        1 => Ok(1.0),
        2 => Ok(0.5),
        _ => Err(NoiseError::InvalidParameter(format!(
            "requirements are available for K = 1 and K = 2, got K = {k}"
        ))),
    }
}

/// Largest channel loss compatible with the dark-count and probe-loss terms.
pub fn max_channel_loss(lambda_det: f64, zeta: f64, eps: f64) -> f64 {
    if zeta == 0.0 {
        f64::INFINITY
    } else {
        2.0 * eps * eps * lambda_det / zeta
    }
}

/// Evaluates the six requirements for budget `ε` and `K ∈ {1, 2}`.
pub fn feasibility_check(
    noise: &NoiseParams,
    alpha: Complex64,
    chi: f64,
    gamma: Complex64,
    eps: f64,
    k: usize,
) -> Result<FeasibilityReport> {
    noise.validate()?;
    let f = check_inputs(eps, k)?;
    let a2 = alpha.norm_sqr();
    let x = a2 * chi * chi;
    let lambda_max = max_channel_loss(noise.lambda_det, noise.zeta, eps);
    let gamma_bound = if noise.lambda_channel == 0.0 || x == 0.0 {
        f64::INFINITY
    } else {
        eps / (x * noise.lambda_channel)
    };
    let conditions = vec![
        Condition::new("channel loss", lambda_max, noise.lambda_channel),
        Condition::new("storage loss", 2.0 * eps * f, noise.lambda_storage),
        Condition::new("probe phase error", x * eps * f, noise.dphi2),
        Condition::new("Kerr-medium loss", 1.5 * eps * f, noise.lambda_kerr),
        Condition::new("probe intensity", gamma_bound, gamma.norm_sqr()),
        Condition::new(
            "Kerr-strength error",
            eps * f / (2.0 * a2),
            noise.eps_ac.powi(2).max(noise.eps_bc.powi(2)),
        ),
    ];
    let max_attenuation_db = attenuation_db(lambda_max);
    Ok(FeasibilityReport {
        conditions,
        lambda_max,
        max_attenuation_db,
        max_distance_km: max_attenuation_db / FIBER_LOSS_DB_PER_KM,
    })
}

/// Maximally entangled target used for the reach estimates: the two-term
/// Bell-type state for `K = 1`, the low-distinguishability qutrit state for `K = 2`.
pub fn reference_target(k: usize, alpha_sq: f64, chi: f64) -> Result<TargetCoefficients> {
    match k {
        1 => Ok(TargetCoefficients::bell_k1(alpha_sq, alpha_sq, chi)),
        2 => Ok(TargetCoefficients::maxent_k2_low(alpha_sq, alpha_sq, chi)),
        _ => Err(NoiseError::InvalidParameter(format!(
            "reference targets exist for K = 1 and K = 2, got K = {k}"
        ))),
    }
}

/// Operating point of the reach analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachSetup {
    pub k: usize,
    pub alpha_sq: f64,
    pub chi: f64,
    pub detector: Detector,
    /// Per-term budget `ε`.
    pub eps: f64,
    /// Upper limit on `|γ|²` (see [`DEFAULT_GAMMA_SQ_CAP`]).
    pub gamma_sq_cap: f64,
}

/// Success probability at one channel loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachPoint {
    pub lambda_channel: f64,
    pub attenuation_db: f64,
    /// Probe intensity used: the probe-intensity ceiling, capped.
    pub gamma_sq: f64,
    /// One-run success probability; zero beyond the dark-count limit.
    pub probability: f64,
}

impl ReachSetup {
    fn validate(&self) -> Result<()> {
        check_inputs(self.eps, self.k)?;
        if !(self.alpha_sq > 0.0 && self.chi > 0.0 && self.gamma_sq_cap > 0.0) {
            return Err(NoiseError::InvalidParameter(
                "|α|², χ and the |γ|² cap must be positive".into(),
            ));
        }
        NoiseParams {
            lambda_det: self.detector.lambda_det,
            zeta: self.detector.zeta,
            ..NoiseParams::ideal()
        }
        .validate()
    }

    /// Success probability at channel loss `Λ` with the probe at its ceiling
    /// `min(ε/(|α|²χ²Λ), cap)`.
    pub fn point(&self, lambda_channel: f64) -> Result<ReachPoint> {
        self.validate()?;
        let x = self.alpha_sq * self.chi * self.chi;
        let ceiling = if lambda_channel > 0.0 {
            self.eps / (x * lambda_channel)
        } else {
            f64::INFINITY
        };
        let gamma_sq = ceiling.min(self.gamma_sq_cap);
        let lambda_max = max_channel_loss(self.detector.lambda_det, self.detector.zeta, self.eps);
        let probability = if lambda_channel >= lambda_max {
            0.0
        } else {
            let target = reference_target(self.k, self.alpha_sq, self.chi)?;
            let (_, q) = transmittances(self.k, DEFAULT_DELTA)?;
            let alpha = Complex64::new(self.alpha_sq.sqrt(), 0.0);
            success_probability(
                &target,
                Complex64::new(gamma_sq.sqrt(), 0.0),
                self.detector.lambda_det,
                q,
                alpha,
                alpha,
                self.chi,
            )?
        };
        Ok(ReachPoint {
            lambda_channel,
            attenuation_db: attenuation_db(lambda_channel),
            gamma_sq,
            probability,
        })
    }

    /// [`Self::point`] over a grid of attenuations in dB (parallel, in grid order).
    pub fn sweep_db(&self, db: &[f64]) -> Result<Vec<ReachPoint>> {
        db.par_iter().map(|&d| self.point(loss_from_db(d))).collect()
    }

    /// Largest attenuation (dB) at which the success probability is still at
    /// least `p_min`, or `None` if it is below `p_min` even for a lossless channel.
    pub fn practical_cutoff_db(&self, p_min: f64) -> Result<Option<f64>> {
        let max_db = attenuation_db(max_channel_loss(self.detector.lambda_det, self.detector.zeta, self.eps));
        let ok = |db: f64| -> Result<bool> { Ok(self.point(loss_from_db(db))?.probability >= p_min) };
        if !ok(0.0)? {
            return Ok(None);
        }
        if max_db.is_infinite() {
            return Err(NoiseError::InvalidParameter(
                "no dark counts: the reach is unbounded".into(),
            ));
        }
        // p decreases with the loss and vanishes at the dark-count limit.
        let (mut lo, mut hi) = (0.0, max_db);
        if ok(hi * (1.0 - 1e-12))? {
            return Ok(Some(hi));
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if ok(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-9 {
                break;
            }
        }
        Ok(Some(lo))
    }
}

/// Success probability against target fidelity at fixed channel loss (the
/// budget is `ε = (1 − F)/6`).
pub fn success_vs_fidelity(
    setup: &ReachSetup,
    lambda_channel: f64,
    fidelities: &[f64],
) -> Result<Vec<(f64, ReachPoint)>> {
    fidelities
        .par_iter()
        .map(|&f| {
            let s = ReachSetup {
                eps: epsilon_for_fidelity(f),
                ..*setup
            };
            Ok((f, s.point(lambda_channel)?))
        })
        .collect()
}
