//! Turns target flags into coefficients and physical amplitudes.

use num_complex::Complex64;
use scheme_design::{coeffs_from_photon_target, TargetCoefficients};

use crate::args::{TargetArgs, TargetPreset};
use crate::error::{CliError, Result};
use crate::output::{fmt_complex, fmt_f64, Artifact};

/// Fully specified target with its physical setting.
#[derive(Debug, Clone)]
pub struct ResolvedTarget {
    pub label: String,
    pub target: TargetCoefficients,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub chi: f64,
    pub gamma: Complex64,
    pub delta: f64,
}

impl ResolvedTarget {
    pub fn k(&self) -> usize {
        self.target.k()
    }

    /// Distinguishability `|α|²χ²`.
    pub fn distinguishability(&self) -> f64 {
        self.alpha.norm_sqr() * self.chi * self.chi
    }

    pub fn echo(&self, art: &mut Artifact) {
        art.param("target", &self.label);
        art.param("K", self.k());
        let c: Vec<String> = self.target.coeffs().iter().map(|&z| fmt_complex(z)).collect();
        art.param("coeffs", c.join(" "));
        art.param("alpha", fmt_complex(self.alpha));
        art.param("beta", fmt_complex(self.beta));
        art.param("chi", fmt_f64(self.chi));
        art.param("distinguishability", fmt_f64(self.distinguishability()));
        art.param("gamma", fmt_complex(self.gamma));
        art.param("delta", fmt_f64(self.delta));
    }
}

/// Default `(|α|², χ)` of each named target.
pub fn preset_defaults(p: TargetPreset) -> (f64, f64) {
    match p {
        TargetPreset::BellK1 => (10.0, 0.1f64.sqrt()),
        TargetPreset::MaxentK2Low => (10.0, 1e-5f64.sqrt()),
        TargetPreset::MaxentK2High => (25.0, 2.0),
        TargetPreset::PhotonCorrelated => (0.01, 1.0),
    }
}

fn preset_name(p: TargetPreset) -> &'static str {
    match p {
        TargetPreset::BellK1 => "bell-k1",
        TargetPreset::MaxentK2Low => "maxent-k2-low",
        TargetPreset::MaxentK2High => "maxent-k2-high",
        TargetPreset::PhotonCorrelated => "photon-correlated",
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn resolve(args: &TargetArgs) -> Result<ResolvedTarget> {
    let (label, default_alpha, default_chi) = match (args.preset, &args.coeffs) {
        (Some(p), _) => {
            let (a2, chi) = preset_defaults(p);
            (
                preset_name(p).to_string(),
                Some(Complex64::new(a2.sqrt(), 0.0)),
                Some(chi),
            )
        }
        (None, Some(_)) => ("explicit".to_string(), None, None),
        (None, None) => return Err(config("give either --preset or --coeffs")),
    };
    let alpha = args
        .alpha
        .or(default_alpha)
        .ok_or_else(|| config("--alpha is required with explicit coefficients"))?;
    let chi = args
        .chi
        .or(default_chi)
        .ok_or_else(|| config("--chi is required with explicit coefficients"))?;
    let beta = args.beta.unwrap_or(alpha);
    check_physics(alpha, beta, chi, args.gamma, args.delta)?;
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let fixed_k = |k: usize| -> Result<()> {
        match args.k {
            Some(given) if given != k => Err(config(format!(
                "target `{label}` has K = {k}, but --K {given} was given"
            ))),
            _ => Ok(()),
        }
    };
    let target = match (args.preset, &args.coeffs) {
        (Some(TargetPreset::BellK1), _) => {
            fixed_k(1)?;
            TargetCoefficients::bell_k1(a2, b2, chi)
        }
        (Some(TargetPreset::MaxentK2Low), _) => {
            fixed_k(2)?;
            TargetCoefficients::maxent_k2_low(a2, b2, chi)
        }
        (Some(TargetPreset::MaxentK2High), _) => {
            fixed_k(2)?;
            TargetCoefficients::maxent_k2_high(a2, b2, chi)
        }
        (Some(TargetPreset::PhotonCorrelated), _) => coeffs_from_photon_target(args.s, args.k.unwrap_or(2), chi)?,
        (None, Some(c)) => {
            let t = TargetCoefficients::new(c.clone())?;
            fixed_k(t.k())?;
            t
        }
        (None, None) => unreachable!("checked above"),
    };
    Ok(ResolvedTarget {
        label,
        target,
        alpha,
        beta,
        chi,
        gamma: args.gamma,
        delta: args.delta,
    })
}

pub fn check_physics(alpha: Complex64, beta: Complex64, chi: f64, gamma: Complex64, delta: f64) -> Result<()> {
    if !(alpha.norm() > 0.0 && alpha.norm().is_finite() && beta.norm() > 0.0 && beta.norm().is_finite()) {
        return Err(config("coherent amplitudes must be finite and nonzero"));
    }
    if !(chi > 0.0 && chi <= std::f64::consts::PI) {
        return Err(config(format!("chi must lie in (0, π], got {chi}")));
    }
    if !(gamma.norm() > 0.0 && gamma.norm().is_finite()) {
        return Err(config("the probe amplitude must be finite and nonzero"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(config(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}
