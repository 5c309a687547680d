//! Overlap structure of the coherent states `|αe^{iχn}⟩`, `n = 0..K`.

use fock_core::coherent_overlap;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Gram matrices `G_a[m][n] = ⟨αe^{iχm}|αe^{iχn}⟩` and `G_b` (same with `β`).
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub g_a: DMatrix<Complex64>,
    pub g_b: DMatrix<Complex64>,
}

/// `⟨ze^{iχm}|ze^{iχn}⟩ = exp(−|z|²(1 − e^{iχ(n−m)}))`.
pub fn rotated_overlap(z: Complex64, chi: f64, m: usize, n: usize) -> Complex64 {
    let d = chi * (n as f64 - m as f64);
    (-z.norm_sqr() * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, d))).exp()
}

fn gram(z: Complex64, chi: f64, k: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(k + 1, k + 1, |m, n| rotated_overlap(z, chi, m, n))
}

impl GramPair {
    /// Gram matrices of the `K+1` rotated coherent states of each mode.
    pub fn new(alpha: Complex64, beta: Complex64, chi: f64, k: usize) -> Self {
        Self {
            g_a: gram(alpha, chi, k),
            g_b: gram(beta, chi, k),
        }
    }

    /// Number of coherent-pair terms `K+1`.
    pub fn dim(&self) -> usize {
        self.g_a.nrows()
    }

    /// Element-wise product `G_a ∘ G_b`: the Gram matrix of the pairs
    /// `|αe^{iχn}⟩|βe^{iχn}⟩`.
    pub fn pair_gram(&self) -> DMatrix<Complex64> {
        self.g_a.component_mul(&self.g_b)
    }

    /// `‖Σ c_n |αe^{iχn}⟩|βe^{iχn}⟩‖²`.
    pub fn norm_sqr(&self, c: &[Complex64]) -> f64 {
        let g = self.pair_gram();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, cm) in c.iter().enumerate() {
            for (n, cn) in c.iter().enumerate() {
                acc += cm.conj() * g[(m, n)] * cn;
            }
        }
        acc.re
    }
}

/// Same overlap evaluated through the general coherent-state formula (used as a check).
pub fn overlap_via_states(z: Complex64, chi: f64, m: usize, n: usize) -> Complex64 {
    let rot = |k: usize| Complex64::from_polar(1.0, chi * k as f64);
    coherent_overlap(z * rot(m), z * rot(n))
}
