//! Beamsplitter cascade and reference-beam network of the elimination measurement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchemeError};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Transmittances `T_1..T_K` of the probe cascade and the splitting fraction `q`.
///
/// `T_j = ((K−j−1)(1−δ)+1)/((K−j)(1−δ)+1)`, so `T_K = δ`, and
/// `q = (K + δ/(1−δ))^{−1/2}` is the amplitude fraction reaching every detector arm.
pub fn transmittances(k: usize, delta: f64) -> Result<(Vec<f64>, f64)> {
    if k < 1 {
        return Err(SchemeError::InvalidParameter("K must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SchemeError::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let kf = k as f64;
    let t = (1..=k)
        .map(|j| {
            let j = j as f64;
            // Numerator written as (K−j)(1−δ)+δ so that T_K = δ without cancellation.
            ((kf - j) * (1.0 - delta) + delta) / ((kf - j) * (1.0 - delta) + 1.0)
        })
        .collect();
    let q = (kf + delta / (1.0 - delta)).powf(-0.5);
    Ok((t, q))
}

/// Beamsplitter angles `θ_j` with `T_j = cos²θ_j`, `θ_j ∈ [0, π/2]`.
pub fn angles(t: &[f64]) -> Vec<f64> {
    t.iter().map(|&tj| tj.sqrt().clamp(0.0, 1.0).acos()).collect()
}

/// Largest violation of `sinθ_j·Π_{k<j} cosθ_k = q` over the cascade.
pub fn cascade_residual(t: &[f64], q: f64) -> f64 {
    let th = angles(t);
    let mut prod = 1.0;
    let mut worst: f64 = 0.0;
    for &tj in &th {
        worst = worst.max((tj.sin() * prod - q).abs());
        prod *= tj.cos();
    }
    worst
}

/// Reference amplitudes `γ̃_j = −(iq/cosθ_j)(γ_j + sin²θ_j Σ_{k<j} γ_k)`.
///
/// `roots` lists the roots with multiplicity in detector order. With these
/// references a coherent probe `|γ_x⟩` leaves detector arm `j` in
/// `|iq(γ_x − γ_j)⟩`.
pub fn reference_amplitudes(roots: &[Complex64], t: &[f64], q: f64) -> Vec<Complex64> {
    let th = angles(t);
    let mut partial = Complex64::new(0.0, 0.0);
    roots
        .iter()
        .zip(&th)
        .map(|(&g, &tj)| {
            let s2 = tj.sin().powi(2);
            let out = -(I * q / tj.cos()) * (g + s2 * partial);
            partial += g;
            out
        })
        .collect()
}

/// Coherent amplitudes leaving the probe cascade for probe input `γ_x`, found by
/// propagating coherent amplitudes through each beamsplitter
/// (`|u⟩|v⟩ → |u cosθ + i v sinθ⟩|v cosθ + i u sinθ⟩`).
///
/// Returns `(probe output, [detector arm amplitudes])`.
pub fn cascade_outputs(gamma_x: Complex64, t: &[f64], gtilde: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let th = angles(t);
    let mut c = gamma_x;
    let mut arms = Vec::with_capacity(th.len());
    for (&tj, &g) in th.iter().zip(gtilde) {
        let (cs, sn) = (tj.cos(), tj.sin());
        arms.push(g * cs + I * c * sn);
        c = c * cs + I * g * sn;
    }
    (c, arms)
}

/// Closed-form probe output `γ′₀(γ_x) = √(1−Kq²)·γ_x + q√((1−δ)/δ)·Σ_j γ_j`.
pub fn probe_output(gamma_x: Complex64, roots: &[Complex64], q: f64, delta: f64) -> Complex64 {
    let k = roots.len() as f64;
    let sum: Complex64 = roots.iter().sum();
    (1.0 - k * q * q).max(0.0).sqrt() * gamma_x + q * ((1.0 - delta) / delta).sqrt() * sum
}

/// Reference-splitting network: one master beam `γ̃` divided into the `K`
/// reference beams by beamsplitters `T′_j` and phase shifters `φ_j`:
/// `γ̃_j = i cosθ′_1⋯cosθ′_{j−1} sinθ′_j e^{iφ_j} γ̃` for `j < K`,
/// `γ̃_K = i cosθ′_1⋯cosθ′_{K−1} γ̃`, with `T′_j = cos²θ′_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceNetwork {
    /// `T′_1..T′_{K−1}`.
    pub tp: Vec<f64>,
    /// `φ_1..φ_{K−1}` in `(−π, π]`.
    pub phi: Vec<f64>,
    /// Master reference amplitude `γ̃`.
    pub gtilde_master: Complex64,
}

fn wrap(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(2.0 * std::f64::consts::PI);
    if p > std::f64::consts::PI {
        p -= 2.0 * std::f64::consts::PI;
    }
    p
}

impl ReferenceNetwork {
    /// Solves the splitting equations in closed form.
    ///
    /// Energy conservation fixes `|γ̃|² = Σ|γ̃_j|²`; each `sinθ′_j` is the fraction
    /// of the remaining intensity diverted to arm `j`; the phases follow from the
    /// arguments relative to the last non-empty arm. Arms with zero amplitude get
    /// `φ_j = 0`.
    pub fn solve(gtilde: &[Complex64]) -> Result<Self> {
        if gtilde.is_empty() {
            return Err(SchemeError::InvalidParameter("no reference amplitudes".into()));
        }
        if gtilde.iter().any(|g| !g.re.is_finite() || !g.im.is_finite()) {
            return Err(SchemeError::InvalidParameter(
                "reference amplitudes must be finite".into(),
            ));
        }
        let k = gtilde.len();
        let total: f64 = gtilde.iter().map(|g| g.norm_sqr()).sum();
        let last = gtilde.iter().rposition(|g| g.norm() > 0.0);
        let Some(last) = last else {
            return Ok(Self {
                tp: vec![1.0; k - 1],
                phi: vec![0.0; k - 1],
                gtilde_master: Complex64::new(0.0, 0.0),
            });
        };
        let ref_arg = gtilde[last].arg();
        let master = Complex64::from_polar(total.sqrt(), ref_arg - std::f64::consts::FRAC_PI_2);
        let mut remaining = total;
        let mut tp = Vec::with_capacity(k - 1);
        let mut phi = Vec::with_capacity(k - 1);
        for (j, g) in gtilde.iter().enumerate().take(k - 1) {
            let frac = if remaining > 0.0 {
                (g.norm_sqr() / remaining).clamp(0.0, 1.0)
            } else {
                0.0
            };
            tp.push(1.0 - frac);
            remaining -= g.norm_sqr();
            phi.push(if g.norm() > 0.0 && j != last {
                wrap(g.arg() - ref_arg)
            } else {
                0.0
            });
        }
        Ok(Self {
            tp,
            phi,
            gtilde_master: master,
        })
    }

    /// Reference amplitudes produced by this network (forward evaluation).
    pub fn outputs(&self) -> Vec<Complex64> {
        let k = self.tp.len() + 1;
        let mut carried = self.gtilde_master;
        let mut out = Vec::with_capacity(k);
        for j in 0..k - 1 {
            let th = self.tp[j].sqrt().clamp(0.0, 1.0).acos();
            out.push(I * th.sin() * Complex64::from_polar(1.0, self.phi[j]) * carried);
            carried *= th.cos();
        }
        out.push(I * carried);
        out
    }

    /// Largest deviation of the forward outputs from the requested amplitudes.
    pub fn residual(&self, gtilde: &[Complex64]) -> f64 {
        self.outputs()
            .iter()
            .zip(gtilde)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
