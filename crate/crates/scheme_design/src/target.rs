//! Target coefficients `c_n` of `Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩` and the standard families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchemeError};

/// Unnormalized coefficients `(c_0, …, c_K)` of the target state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCoefficients {
    c: Vec<Complex64>,
}

impl TargetCoefficients {
    /// Requires `K ≥ 1`, finite entries and `c_K ≠ 0`.
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.len() < 2 {
            return Err(SchemeError::InvalidTarget(format!(
                "need at least two coefficients (K >= 1), got {}",
                c.len()
            )));
        }
        if c.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(SchemeError::InvalidTarget("coefficients must be finite".into()));
        }
        if c.iter().all(|x| x.norm() == 0.0) {
            return Err(SchemeError::InvalidTarget(
                "coefficient vector is identically zero".into(),
            ));
        }
        if c[c.len() - 1].norm() == 0.0 {
            return Err(SchemeError::DegenerateLeadingCoefficient);
        }
        Ok(Self { c })
    }

    /// Number of detectors (degree of the design polynomial).
    pub fn k(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// Same state with every coefficient multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    /// Maximally entangled qubit-type target for one detector:
    /// `c_0 = 1`, `c_1 = −exp(−i(|α|²+|β|²) sin χ)`.
    pub fn bell_k1(alpha_sq: f64, beta_sq: f64, chi: f64) -> Self {
        let c1 = -Complex64::from_polar(1.0, -(alpha_sq + beta_sq) * chi.sin());
        Self::new(vec![Complex64::new(1.0, 0.0), c1]).expect("non-degenerate")
    }

    /// Two-detector optimum for low distinguishability `|α|²χ² ≪ 1` (`|α| = |β|`):
    /// `c = (1, −2(1 − |α|²χ²)e^{−2i|α|²χ}, e^{−4i|α|²χ})`.
    ///
    /// With `|α| ≠ |β|` the mean intensity `(|α|²+|β|²)/2` is used.
    pub fn maxent_k2_low(alpha_sq: f64, beta_sq: f64, chi: f64) -> Self {
        let a2 = 0.5 * (alpha_sq + beta_sq);
        let x = a2 * chi * chi;
        Self::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(-2.0 * (1.0 - x), -2.0 * a2 * chi),
            Complex64::from_polar(1.0, -4.0 * a2 * chi),
        ])
        .expect("non-degenerate")
    }

    /// Two-detector optimum for high distinguishability `|α|²χ² ≫ 1`:
    /// `c = (1, −e^{−2i|α|²χ}, e^{−4i|α|²χ})`.
    pub fn maxent_k2_high(alpha_sq: f64, beta_sq: f64, chi: f64) -> Self {
        let a2 = 0.5 * (alpha_sq + beta_sq);
        Self::new(vec![
            Complex64::new(1.0, 0.0),
            -Complex64::from_polar(1.0, -2.0 * a2 * chi),
            Complex64::from_polar(1.0, -4.0 * a2 * chi),
        ])
        .expect("non-degenerate")
    }
}

/// Coefficients of `Π_r (x − r)` in ascending powers (leading coefficient 1).
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (n, a) in p.iter().enumerate() {
            next[n + 1] += a;
            next[n] -= a * r;
        }
        p = next;
    }
    p
}

/// Target whose all-click state is the photon-number-correlated state `|Φ(s, K)⟩`:
/// the design roots are `γe^{iχs′}` for every `s′ ∈ {0..K} \ {s}`, so that
/// `Σ_n c_n e^{iχs′n} = 0` for all those `s′`; `c_K = 1`.
pub fn coeffs_from_photon_target(s: usize, k: usize, chi: f64) -> Result<TargetCoefficients> {
    if k < 1 || s > k {
        return Err(SchemeError::InvalidParameter(format!(
            "need 0 <= s <= K and K >= 1, got s={s}, K={k}"
        )));
    }
    let roots: Vec<Complex64> = (0..=k)
        .filter(|&sp| sp != s)
        .map(|sp| Complex64::from_polar(1.0, chi * sp as f64))
        .collect();
    TargetCoefficients::new(poly_from_roots(&roots))
}
