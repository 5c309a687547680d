//! Dense multimode pure states.

use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::trunc::{coherent_amplitudes, TruncationSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pure (possibly sub-normalized) state of several bosonic modes in a truncated
/// Fock basis.
///
/// Amplitudes are stored row-major over the multi-index `(n_0, …, n_{M−1})`,
/// with the first declared mode varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: Vec<String>,
    amps: Vec<Complex64>,
    trunc: TruncationSpec,
}

impl FockVector {
    /// Wraps an amplitude array, checking its length against the mode count.
    pub fn new<S: AsRef<str>>(modes: &[S], amps: Vec<Complex64>, trunc: TruncationSpec) -> Result<Self> {
        let modes = owned_modes(modes)?;
        let expected = trunc.dim().pow(modes.len() as u32);
        if amps.len() != expected {
            return Err(FockError::ShapeMismatch(format!(
                "{} amplitudes for {} modes with dim {} (expected {expected})",
                amps.len(),
                modes.len(),
                trunc.dim()
            )));
        }
        Ok(Self { modes, amps, trunc })
    }

    /// All modes in vacuum.
    pub fn vacuum<S: AsRef<str>>(modes: &[S], trunc: TruncationSpec) -> Result<Self> {
        let modes = owned_modes(modes)?;
        let mut amps = vec![ZERO; trunc.dim().pow(modes.len() as u32)];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { modes, amps, trunc })
    }

    /// Tensor product of single-mode amplitude vectors (each of length `n_max + 1`).
    pub fn product<S: AsRef<str>>(modes: &[S], factors: &[Vec<Complex64>], trunc: TruncationSpec) -> Result<Self> {
        let modes = owned_modes(modes)?;
        if factors.len() != modes.len() || factors.iter().any(|f| f.len() != trunc.dim()) {
            return Err(FockError::ShapeMismatch(
                "product factors must match the modes and the truncation dimension".into(),
            ));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            let mut next = Vec::with_capacity(amps.len() * f.len());
            for a in &amps {
                next.extend(f.iter().map(|b| a * b));
            }
            amps = next;
        }
        Ok(Self { modes, amps, trunc })
    }

    /// Product of coherent states `|z_0⟩⊗|z_1⟩⊗…`.
    pub fn coherent_product<S: AsRef<str>>(modes: &[S], zs: &[Complex64], trunc: TruncationSpec) -> Result<Self> {
        let factors = zs
            .iter()
            .map(|&z| coherent_amplitudes(z, &trunc))
            .collect::<Result<Vec<_>>>()?;
        Self::product(modes, &factors, trunc)
    }

    /// Single Fock basis state `|n_0, n_1, …⟩`.
    pub fn basis<S: AsRef<str>>(modes: &[S], occupation: &[usize], trunc: TruncationSpec) -> Result<Self> {
        let mut v = Self::new(modes, vec![ZERO; trunc.dim().pow(modes.len() as u32)], trunc)?;
        if occupation.len() != v.modes.len() || occupation.iter().any(|&n| n > trunc.n_max()) {
            return Err(FockError::ShapeMismatch(
                "occupation outside the truncated basis".into(),
            ));
        }
        let idx = v.flat_index(occupation);
        v.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    /// Total Hilbert-space dimension.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Position of a mode label.
    pub fn mode_index(&self, mode: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| FockError::UnknownMode(mode.to_string()))
    }

    /// Flat-index stride of the mode at position `idx`.
    pub fn stride(&self, idx: usize) -> usize {
        self.trunc.dim().pow((self.modes.len() - 1 - idx) as u32)
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, occupation: &[usize]) -> usize {
        occupation.iter().fold(0, |acc, &n| acc * self.trunc.dim() + n)
    }

    /// Multi-index of a flat index.
    pub fn occupation(&self, mut flat: usize) -> Vec<usize> {
        let d = self.trunc.dim();
        let mut occ = vec![0; self.modes.len()];
        for slot in occ.iter_mut().rev() {
            *slot = flat % d;
            flat /= d;
        }
        occ
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Complex64 {
        self.amps[self.flat_index(occupation)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Copy scaled to unit norm (the zero vector is returned unchanged).
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            modes: self.modes.clone(),
            amps: self.amps.iter().map(|a| a * s).collect(),
            trunc: self.trunc,
        }
    }

    /// Returns a state with the same layout but new amplitudes.
    pub fn with_amplitudes(&self, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(&self.modes, amps, self.trunc)
    }

    /// Checks that two states share modes and truncation.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes || self.trunc.dim() != other.trunc.dim() {
            return Err(FockError::ShapeMismatch(format!(
                "modes {:?}/dim {} vs modes {:?}/dim {}",
                self.modes,
                self.trunc.dim(),
                other.modes,
                other.trunc.dim()
            )));
        }
        Ok(())
    }

    /// Flat offsets of all basis states in which the listed mode positions are empty.
    /// Adding `Σ n_k·stride_k` to each offset enumerates the listed modes.
    pub fn base_offsets(&self, fixed: &[usize]) -> Vec<usize> {
        let d = self.trunc.dim();
        let mut offsets = vec![0usize];
        for idx in 0..self.modes.len() {
            if fixed.contains(&idx) {
                continue;
            }
            let s = self.stride(idx);
            offsets = offsets.iter().flat_map(|&o| (0..d).map(move |n| o + n * s)).collect();
        }
        offsets
    }

    /// Tensor product `self ⊗ other` (modes concatenated).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.trunc.dim() != other.trunc.dim() {
            return Err(FockError::ShapeMismatch("tensor factors need equal truncation".into()));
        }
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Self::new(&modes, amps, self.trunc)
    }

    /// Little-endian dump: `(re, im)` f64 pairs in row-major multi-index order,
    /// modes in declared order.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            out.extend_from_slice(&a.re.to_le_bytes());
            out.extend_from_slice(&a.im.to_le_bytes());
        }
        out
    }

    /// Inverse of [`FockVector::to_le_bytes`].
    pub fn from_le_bytes<S: AsRef<str>>(modes: &[S], trunc: TruncationSpec, bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(16) {
            return Err(FockError::ShapeMismatch("byte length is not a multiple of 16".into()));
        }
        let amps = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8-byte chunk"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8-byte chunk"));
                Complex64::new(re, im)
            })
            .collect();
        Self::new(modes, amps, trunc)
    }
}

fn owned_modes<S: AsRef<str>>(modes: &[S]) -> Result<Vec<String>> {
    let owned: Vec<String> = modes.iter().map(|m| m.as_ref().to_string()).collect();
    for (i, m) in owned.iter().enumerate() {
        if owned[..i].contains(m) {
            return Err(FockError::ShapeMismatch(format!("duplicate mode `{m}`")));
        }
    }
    Ok(owned)
}

/// `⟨a|b⟩` for states over identical modes and truncation.
pub fn inner(a: &FockVector, b: &FockVector) -> Result<Complex64> {
    a.check_compatible(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}
