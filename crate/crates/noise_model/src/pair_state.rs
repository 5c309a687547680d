//! States in the coherent-pair representation.
//!
//! Every ket is a product of coherent states `|a⟩|b⟩` tagged with the index `n`
//! of the target coefficient it descends from. The stage maps act on the
//! density coefficients through these labels (damping of `n₁ ≠ n₂` pairs) or
//! on the amplitudes of the kets (phase errors), so all states met in the noise
//! pipeline stay finite mixtures of such kets and are handled exactly through
//! coherent-state overlaps, without a Fock truncation.

use fock_core::coherent_overlap;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{NoiseError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Product coherent ket `|a⟩|b⟩` descending from target coefficient `label`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairKet {
    pub a: Complex64,
    pub b: Complex64,
    pub label: usize,
}

impl PairKet {
    /// `|αe^{iχn}⟩|βe^{iχn}⟩`.
    pub fn rotated(alpha: Complex64, beta: Complex64, chi: f64, n: usize) -> Self {
        let rot = Complex64::from_polar(1.0, chi * n as f64);
        Self {
            a: alpha * rot,
            b: beta * rot,
            label: n,
        }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PairKet) -> Complex64 {
        coherent_overlap(self.a, other.a) * coherent_overlap(self.b, other.b)
    }
}

fn gram(kets: &[PairKet]) -> DMatrix<Complex64> {
    DMatrix::from_fn(kets.len(), kets.len(), |i, j| kets[i].overlap(&kets[j]))
}

/// Pure state `Σ_i v_i |ket_i⟩` (not necessarily normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct PairVector {
    pub kets: Vec<PairKet>,
    pub amps: Vec<Complex64>,
}

impl PairVector {
    /// `Σ_n c_n |αe^{iχn}⟩|βe^{iχn}⟩`.
    pub fn superposition(coeffs: &[Complex64], alpha: Complex64, beta: Complex64, chi: f64) -> Self {
        Self {
            kets: (0..coeffs.len())
                .map(|n| PairKet::rotated(alpha, beta, chi, n))
                .collect(),
            amps: coeffs.to_vec(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PairVector) -> Complex64 {
        let mut acc = ZERO;
        for (ki, vi) in self.kets.iter().zip(&self.amps) {
            for (kj, vj) in other.kets.iter().zip(&other.amps) {
                acc += vi.conj() * ki.overlap(kj) * vj;
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    /// Rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_nan() || n <= 0.0 {
            return Err(NoiseError::InvalidParameter("state has zero norm".into()));
        }
        let s = 1.0 / n.sqrt();
        Ok(Self {
            kets: self.kets.clone(),
            amps: self.amps.iter().map(|v| v * s).collect(),
        })
    }

    /// `Σ_i label_iˢ v_i |ket_i⟩` (the label-weighted states used in the expansions).
    pub fn label_power(&self, s: i32) -> Self {
        Self {
            kets: self.kets.clone(),
            amps: self
                .kets
                .iter()
                .zip(&self.amps)
                .map(|(k, v)| v * (k.label as f64).powi(s))
                .collect(),
        }
    }

    /// `|self⟩⟨self|` as a pair state.
    pub fn projector(&self) -> CoeffPairState {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        CoeffPairState {
            kets: self.kets.clone(),
            rho: &v * v.adjoint(),
        }
    }
}

/// Mixed state `ρ = Σ_{ij} ρ_ij |ket_i⟩⟨ket_j|` over coherent-pair kets.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPairState {
    kets: Vec<PairKet>,
    rho: DMatrix<Complex64>,
}

impl CoeffPairState {
    /// Builds a state from kets and a Hermitian coefficient matrix.
    pub fn new(kets: Vec<PairKet>, rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != kets.len() || rho.ncols() != kets.len() {
            return Err(NoiseError::InvalidParameter(format!(
                "{}×{} coefficients for {} kets",
                rho.nrows(),
                rho.ncols(),
                kets.len()
            )));
        }
        let state = Self { kets, rho };
        let scale = state.rho.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if state.hermiticity_defect() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(NoiseError::InvalidParameter(
                "coefficient matrix is not Hermitian".into(),
            ));
        }
        Ok(state)
    }

    /// `|Ψ⟩⟨Ψ|` for `Ψ = Σ_n c_n |αe^{iχn}⟩|βe^{iχn}⟩`.
    pub fn pure(coeffs: &[Complex64], alpha: Complex64, beta: Complex64, chi: f64) -> Self {
        PairVector::superposition(coeffs, alpha, beta, chi).projector()
    }

    pub fn kets(&self) -> &[PairKet] {
        &self.kets
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// `max |ρ_ij − ρ_ji*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// `Tr ρ = Σ_ij ρ_ij ⟨ket_j|ket_i⟩`.
    pub fn trace(&self) -> f64 {
        let g = gram(&self.kets);
        let mut acc = ZERO;
        for i in 0..self.kets.len() {
            for j in 0..self.kets.len() {
                acc += self.rho[(i, j)] * g[(j, i)];
            }
        }
        acc.re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PairVector) -> f64 {
        let proj: Vec<Complex64> = self
            .kets
            .iter()
            .map(|k| {
                psi.kets
                    .iter()
                    .zip(&psi.amps)
                    .map(|(pk, pv)| pv.conj() * pk.overlap(k))
                    .sum()
            })
            .collect();
        let mut acc = ZERO;
        for i in 0..self.kets.len() {
            for j in 0..self.kets.len() {
                acc += proj[i] * self.rho[(i, j)] * proj[j].conj();
            }
        }
        acc.re
    }

    /// Fidelity `⟨ψ|ρ|ψ⟩ / (Tr ρ ‖ψ‖²)` with a pure state.
    pub fn fidelity(&self, psi: &PairVector) -> f64 {
        self.expectation(psi) / (self.trace() * psi.norm_sqr())
    }

    /// `ρ / Tr ρ`.
    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t.is_nan() || t <= 0.0 {
            return Err(NoiseError::InvalidParameter("state has zero trace".into()));
        }
        Ok(self.scaled(1.0 / t))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            kets: self.kets.clone(),
            rho: self.rho.map(|x| x * s),
        }
    }

    /// `self + weight·other` (kets concatenated, coefficients block-diagonal).
    pub fn mix(&self, other: &CoeffPairState, weight: f64) -> Self {
        let (n, m) = (self.kets.len(), other.kets.len());
        let mut rho = DMatrix::from_element(n + m, n + m, ZERO);
        rho.view_mut((0, 0), (n, n)).copy_from(&self.rho);
        rho.view_mut((n, n), (m, m)).copy_from(&other.rho.map(|x| x * weight));
        Self {
            kets: self.kets.iter().chain(&other.kets).copied().collect(),
            rho,
        }
    }

    /// Multiplies `ρ_ij` by `f(label_i, label_j)`.
    pub fn map_coefficients(&self, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let rho = DMatrix::from_fn(self.kets.len(), self.kets.len(), |i, j| {
            self.rho[(i, j)] * f(self.kets[i].label, self.kets[j].label)
        });
        Self {
            kets: self.kets.clone(),
            rho,
        }
    }

    /// Replaces every ket by `f(ket)` keeping the coefficients.
    pub fn map_kets(&self, f: impl Fn(&PairKet) -> PairKet) -> Self {
        Self {
            kets: self.kets.iter().map(f).collect(),
            rho: self.rho.clone(),
        }
    }
}
