//! Photon-number cutoffs and coherent-state amplitudes.

use num_complex::Complex64;

use crate::error::{FockError, Result};

/// Uniform per-mode photon-number cutoff together with the probability mass a
/// coherent state may lose to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    n_max: usize,
    tail_tol: f64,
}

impl TruncationSpec {
    /// Default admissible truncated probability per coherent state.
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(FockError::InvalidTruncation(format!("n_max must be >= 1, got {n_max}")));
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(FockError::InvalidTruncation(format!(
                "tail_tol must lie in (0, 1), got {tail_tol}"
            )));
        }
        Ok(Self { n_max, tail_tol })
    }

    /// Smallest cutoff whose coherent tail for amplitude modulus `abs_z` is within `tail_tol`.
    pub fn for_amplitude(abs_z: f64, tail_tol: f64) -> Result<Self> {
        let probe = Self::new(1, tail_tol)?;
        let mut n_max = probe.n_max;
        while coherent_tail(abs_z, n_max) > tail_tol {
            n_max += 1;
        }
        Self::new(n_max, tail_tol)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Number of basis states per mode, `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Same tolerance, different cutoff.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::new(n_max, self.tail_tol)
    }
}

/// `ln n!` by direct summation (exact enough for the cutoffs used here).
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Poisson probability mass above `n_max` for mean photon number `abs_z²`,
/// summed directly from the tail so that tiny values keep full relative precision.
pub fn coherent_tail(abs_z: f64, n_max: usize) -> f64 {
    let r = abs_z * abs_z;
    if r == 0.0 {
        return 0.0;
    }
    let ln_r = r.ln();
    let mut n = n_max + 1;
    let mut ln_term = -r + n as f64 * ln_r - ln_factorial(n);
    let mut total = 0.0;
    loop {
        let term = ln_term.exp();
        total += term;
        // Terms decrease geometrically once n exceeds the mean.
        if (n as f64) > r && term <= total * 1e-17 {
            break;
        }
        n += 1;
        ln_term += ln_r - (n as f64).ln();
        if n > n_max + 100_000 {
            break;
        }
    }
    total.min(1.0)
}

/// Coherent-state Fock amplitudes `Q_n(z) = zⁿ/√n!·e^{−|z|²/2}` for `n = 0..=n_max`.
///
/// Fails with [`FockError::TailTooHeavy`] when the discarded probability exceeds
/// the truncation tolerance.
pub fn coherent_amplitudes(z: Complex64, trunc: &TruncationSpec) -> Result<Vec<Complex64>> {
    let n_max = trunc.n_max();
    let abs = z.norm();
    let tail = coherent_tail(abs, n_max);
    if tail > trunc.tail_tol() {
        return Err(FockError::TailTooHeavy {
            abs,
            n_max,
            tail,
            tol: trunc.tail_tol(),
        });
    }
    Ok(coherent_amplitudes_unchecked(z, n_max))
}

/// Coherent amplitudes without the tail check (used where the caller accounts
/// for the truncated mass itself).
pub fn coherent_amplitudes_unchecked(z: Complex64, n_max: usize) -> Vec<Complex64> {
    let abs = z.norm();
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if abs == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    // Work with log-magnitudes so that large n never under/overflows midway.
    let ln_abs = abs.ln();
    let phase = z.arg();
    let mut ln_fact = 0.0;
    for (n, slot) in out.iter_mut().enumerate() {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let ln_mag = -0.5 * abs * abs + n as f64 * ln_abs - 0.5 * ln_fact;
        *slot = Complex64::from_polar(ln_mag.exp(), n as f64 * phase);
    }
    out
}

/// Closed-form overlap `⟨y|x⟩` of two coherent states.
pub fn coherent_overlap(y: Complex64, x: Complex64) -> Complex64 {
    (-0.5 * y.norm_sqr() - 0.5 * x.norm_sqr() + y.conj() * x).exp()
}
