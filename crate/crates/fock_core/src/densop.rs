//! Density operators: dense, and low-rank mixtures of pure vectors.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::state::FockVector;
use crate::trunc::TruncationSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense density operator over an ordered set of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensOp {
    modes: Vec<String>,
    matrix: DMatrix<Complex64>,
    trunc: TruncationSpec,
}

impl DensOp {
    pub fn new<S: AsRef<str>>(modes: &[S], matrix: DMatrix<Complex64>, trunc: TruncationSpec) -> Result<Self> {
        let modes: Vec<String> = modes.iter().map(|m| m.as_ref().to_string()).collect();
        let dim = trunc.dim().pow(modes.len() as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(FockError::ShapeMismatch(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { modes, matrix, trunc })
    }

    /// `|ψ⟩⟨ψ|` (not renormalized).
    pub fn from_pure(psi: &FockVector) -> Self {
        let v = DMatrix::from_column_slice(psi.len(), 1, psi.amplitudes());
        Self {
            modes: psi.modes().to_vec(),
            matrix: &v * v.adjoint(),
            trunc: *psi.trunc(),
        }
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Copy with unit trace (zero operators are returned unchanged).
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        let mut out = self.clone();
        if t != 0.0 {
            out.matrix /= Complex64::new(t, 0.0);
        }
        out
    }

    fn mode_index(&self, mode: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| FockError::UnknownMode(mode.to_string()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes || self.trunc.dim() != other.trunc.dim() {
            return Err(FockError::ShapeMismatch(format!(
                "modes {:?} vs {:?}",
                self.modes, other.modes
            )));
        }
        Ok(())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = hermitian_eigen(&self.matrix).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &FockVector) -> Result<f64> {
        if psi.modes() != self.modes || psi.trunc().dim() != self.trunc.dim() {
            return Err(FockError::ShapeMismatch(
                "pure state does not match the density operator".into(),
            ));
        }
        let v = DMatrix::from_column_slice(psi.len(), 1, psi.amplitudes());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }
}

/// Hermitian eigen-decomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h)
}

/// Square root of a Hermitian positive semidefinite matrix; eigenvalues below
/// `floor` are clamped to zero.
pub fn psd_sqrt(m: &DMatrix<Complex64>, floor: f64) -> DMatrix<Complex64> {
    let eig = hermitian_eigen(m);
    let n = m.nrows();
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > floor { l.sqrt() } else { 0.0 })
        .collect();
    DMatrix::from_fn(n, n, |r, c| {
        let mut acc = ZERO;
        for (e, s) in roots.iter().enumerate() {
            acc += eig.eigenvectors[(r, e)] * eig.eigenvectors[(c, e)].conj() * *s;
        }
        acc
    })
}

/// Von Neumann entropy in bits of the normalized spectrum `ev` (non-positive entries ignored).
pub fn entropy_bits(ev: &[f64]) -> f64 {
    let total: f64 = ev.iter().filter(|&&l| l > 0.0).sum();
    if total <= 0.0 {
        return 0.0;
    }
    ev.iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| {
            let p = l / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

/// Reduced state after discarding one mode of a pure vector.
pub fn discard_mode(state: &FockVector, mode: &str) -> Result<DensOp> {
    discard_modes(state, &[mode])
}

/// Reduced state after discarding several modes of a pure vector.
///
/// Computed as `M·M⁺`, where `M` is the amplitude array reshaped to
/// (kept modes) × (discarded modes).
pub fn discard_modes(state: &FockVector, modes: &[&str]) -> Result<DensOp> {
    let discard: Vec<usize> = modes.iter().map(|m| state.mode_index(m)).collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..state.modes().len()).filter(|i| !discard.contains(i)).collect();
    let m = reshape_bipartite(state, &keep, &discard);
    let kept: Vec<&str> = keep.iter().map(|&i| state.modes()[i].as_str()).collect();
    DensOp::new(&kept, &m * m.adjoint(), *state.trunc())
}

/// Amplitude matrix with rows indexed by the `rows` modes and columns by `cols` modes.
pub fn reshape_bipartite(state: &FockVector, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
    let d = state.trunc().dim();
    let nr = d.pow(rows.len() as u32);
    let nc = d.pow(cols.len() as u32);
    let amps = state.amplitudes();
    let row_off = offsets(state, rows);
    let col_off = offsets(state, cols);
    DMatrix::from_fn(nr, nc, |r, c| amps[row_off[r] + col_off[c]])
}

/// Entanglement entropy (bits) of a pure state between the listed modes and the rest,
/// from the Schmidt coefficients of the normalized state.
pub fn schmidt_entropy(state: &FockVector, part: &[&str]) -> Result<f64> {
    let rows: Vec<usize> = part.iter().map(|m| state.mode_index(m)).collect::<Result<_>>()?;
    let cols: Vec<usize> = (0..state.modes().len()).filter(|i| !rows.contains(i)).collect();
    let m = reshape_bipartite(state, &rows, &cols);
    let sv = m.singular_values();
    let total: f64 = sv.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let p: Vec<f64> = sv.iter().map(|x| x * x / total).collect();
    Ok(entropy_bits(&p))
}

/// Flat offsets enumerating the listed mode positions in row-major order.
fn offsets(state: &FockVector, idx: &[usize]) -> Vec<usize> {
    let d = state.trunc().dim();
    let mut out = vec![0usize];
    for &i in idx {
        let s = state.stride(i);
        out = out.iter().flat_map(|&o| (0..d).map(move |n| o + n * s)).collect();
    }
    out
}

/// Partial trace of a dense density operator over the listed modes.
pub fn partial_trace(rho: &DensOp, modes: &[&str]) -> Result<DensOp> {
    let traced: Vec<usize> = modes.iter().map(|m| rho.mode_index(m)).collect::<Result<_>>()?;
    let nm = rho.modes.len();
    let keep: Vec<usize> = (0..nm).filter(|i| !traced.contains(i)).collect();
    let d = rho.trunc.dim();
    let stride = |i: usize| d.pow((nm - 1 - i) as u32);
    let enumerate = |idx: &[usize]| {
        let mut out = vec![0usize];
        for &i in idx {
            let s = stride(i);
            out = out
                .iter()
                .flat_map(|&o| (0..d).map(move |n| o + n * s))
                .collect::<Vec<_>>();
        }
        out
    };
    let keep_off = enumerate(&keep);
    let trace_off = enumerate(&traced);
    let nk = keep_off.len();
    let mut out = DMatrix::<Complex64>::zeros(nk, nk);
    for (r, &ro) in keep_off.iter().enumerate() {
        for (c, &co) in keep_off.iter().enumerate() {
            out[(r, c)] = trace_off.iter().map(|&t| rho.matrix[(ro + t, co + t)]).sum();
        }
    }
    let kept: Vec<&str> = keep.iter().map(|&i| rho.modes[i].as_str()).collect();
    DensOp::new(&kept, out, rho.trunc)
}

/// Fidelity `⟨ψ|ρ|ψ⟩ / (Tr ρ·⟨ψ|ψ⟩)` of a density operator with a pure state.
pub fn fidelity_pure(rho: &DensOp, psi: &FockVector) -> Result<f64> {
    let t = rho.trace();
    let n = psi.norm_sqr();
    if t <= 0.0 || n <= 0.0 {
        return Ok(0.0);
    }
    Ok(rho.expectation(psi)? / (t * n))
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` of the trace-normalized operators.
pub fn fidelity(rho: &DensOp, sigma: &DensOp) -> Result<f64> {
    rho.check_compatible(sigma)?;
    let r = rho.normalized();
    let s = sigma.normalized();
    // Rounding-level eigenvalues would contribute O(√ε) each; drop them.
    let sr = psd_sqrt(&r.matrix, 1e-14);
    let inner = &sr * &s.matrix * &sr;
    let ev = hermitian_eigen(&inner).eigenvalues;
    let top = ev.iter().cloned().fold(0.0, f64::max);
    let f: f64 = ev.iter().filter(|&&l| l > top * 1e-14).map(|&l| l.sqrt()).sum();
    Ok(f * f)
}

/// Trace distance `½‖ρ − σ‖₁` of the operators as given (no renormalization).
pub fn trace_distance(rho: &DensOp, sigma: &DensOp) -> Result<f64> {
    rho.check_compatible(sigma)?;
    let diff = &rho.matrix - &sigma.matrix;
    Ok(0.5 * hermitian_eigen(&diff).eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// Von Neumann entropy (bits) of the normalized operator.
pub fn von_neumann_entropy(rho: &DensOp) -> f64 {
    entropy_bits(&rho.eigenvalues())
}

/// Low-rank density operator `ρ = Σ_{kl} W_{kl} |v_k⟩⟨v_l|` over a fixed set of vectors.
///
/// Post-selected protocol outputs are mixtures of a handful of vectors in a large
/// two-mode space; this keeps them cheap while still allowing exact metrics.
#[derive(Debug, Clone)]
pub struct MixedState {
    modes: Vec<String>,
    trunc: TruncationSpec,
    /// Columns are the vectors `v_k`.
    vectors: DMatrix<Complex64>,
    weights: DMatrix<Complex64>,
}

impl MixedState {
    pub fn new(vectors: &[FockVector], weights: DMatrix<Complex64>) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| FockError::ShapeMismatch("mixture needs at least one vector".into()))?;
        for v in vectors {
            first.check_compatible(v)?;
        }
        if weights.nrows() != vectors.len() || weights.ncols() != vectors.len() {
            return Err(FockError::ShapeMismatch(
                "weight matrix does not match vector count".into(),
            ));
        }
        let mut cols = DMatrix::<Complex64>::zeros(first.len(), vectors.len());
        for (k, v) in vectors.iter().enumerate() {
            cols.column_mut(k).copy_from_slice(v.amplitudes());
        }
        Ok(Self {
            modes: first.modes().to_vec(),
            trunc: *first.trunc(),
            vectors: cols,
            weights,
        })
    }

    /// Pure state `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &FockVector) -> Self {
        Self::new(
            std::slice::from_ref(psi),
            DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        )
        .expect("single vector mixture")
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn rank_bound(&self) -> usize {
        self.vectors.ncols()
    }

    /// `V⁺V`, the Gram matrix of the stored vectors.
    fn gram(&self) -> DMatrix<Complex64> {
        self.vectors.adjoint() * &self.vectors
    }

    pub fn trace(&self) -> f64 {
        let g = self.gram();
        // Tr(V W V⁺) = Tr(W V⁺V)
        (&self.weights * g).trace().re
    }

    pub fn normalized(&self) -> Self {
        let t = self.trace();
        let mut out = self.clone();
        if t != 0.0 {
            out.weights /= Complex64::new(t, 0.0);
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.weights *= Complex64::new(s, 0.0);
        out
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &FockVector) -> Result<f64> {
        if psi.modes() != self.modes || psi.trunc().dim() != self.trunc.dim() {
            return Err(FockError::ShapeMismatch("pure state does not match the mixture".into()));
        }
        let p = DMatrix::from_column_slice(psi.len(), 1, psi.amplitudes());
        let a = self.vectors.adjoint() * p;
        Ok((a.adjoint() * &self.weights * &a)[(0, 0)].re)
    }

    /// Fidelity with a pure state, both normalized.
    pub fn fidelity_pure(&self, psi: &FockVector) -> Result<f64> {
        let t = self.trace();
        let n = psi.norm_sqr();
        if t <= 0.0 || n <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.expectation(psi)? / (t * n))
    }

    /// Dense form.
    pub fn to_dens_op(&self) -> DensOp {
        let m = &self.vectors * &self.weights * self.vectors.adjoint();
        DensOp::new(&self.modes, m, self.trunc).expect("mixture dimensions are consistent")
    }

    /// Concatenates two mixtures over the same modes (`ρ₁ + ρ₂`).
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes || self.trunc.dim() != other.trunc.dim() {
            return Err(FockError::ShapeMismatch("mixtures over different modes".into()));
        }
        let (r1, r2) = (self.vectors.ncols(), other.vectors.ncols());
        let mut vectors = DMatrix::zeros(self.vectors.nrows(), r1 + r2);
        vectors.columns_mut(0, r1).copy_from(&self.vectors);
        vectors.columns_mut(r1, r2).copy_from(&other.vectors);
        let mut weights = DMatrix::zeros(r1 + r2, r1 + r2);
        weights.view_mut((0, 0), (r1, r1)).copy_from(&self.weights);
        weights.view_mut((r1, r1), (r2, r2)).copy_from(&other.weights);
        Ok(Self {
            modes: self.modes.clone(),
            trunc: self.trunc,
            vectors,
            weights,
        })
    }

    /// Orthonormal columns `Q` containing the span of the stored vectors and the
    /// coordinates `C` with `V = Q C` (thin Householder QR). Each column keeps its
    /// own relative accuracy, so vectors whose norms differ by many orders of
    /// magnitude are represented faithfully without any rank cutoff.
    fn orthonormal_frame(vectors: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let qr = vectors.clone().qr();
        (qr.q(), qr.r())
    }

    /// Trace distance `½‖ρ − σ‖₁` of the mixtures as given.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let both = self.sum(&other.scaled(-1.0))?;
        let (_, c) = Self::orthonormal_frame(&both.vectors);
        let small = &c * &both.weights * c.adjoint();
        Ok(0.5 * hermitian_eigen(&small).eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Eigenvalues of `ρ` (non-zero part), ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (_, c) = Self::orthonormal_frame(&self.vectors);
        let small = &c * &self.weights * c.adjoint();
        let mut ev: Vec<f64> = hermitian_eigen(&small).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Eigen-decomposition `ρ = Σ λ_e |w_e⟩⟨w_e|` (non-zero part) with orthonormal
    /// eigenvectors, largest eigenvalue first.
    pub fn spectral(&self) -> Result<Vec<(f64, FockVector)>> {
        let (q, c) = Self::orthonormal_frame(&self.vectors);
        let small = &c * &self.weights * c.adjoint();
        let eig = hermitian_eigen(&small);
        let mut out = Vec::with_capacity(small.nrows());
        for e in 0..small.nrows() {
            let w = &q * eig.eigenvectors.column(e);
            out.push((
                eig.eigenvalues[e],
                FockVector::new(&self.modes, w.iter().copied().collect(), self.trunc)?,
            ));
        }
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(out)
    }

    /// Reduced state on the listed modes (the others are traced out).
    pub fn reduced(&self, keep: &[&str]) -> Result<DensOp> {
        let idx: Vec<usize> = keep
            .iter()
            .map(|m| {
                self.modes
                    .iter()
                    .position(|x| x == m)
                    .ok_or_else(|| FockError::UnknownMode(m.to_string()))
            })
            .collect::<Result<_>>()?;
        let rest: Vec<usize> = (0..self.modes.len()).filter(|i| !idx.contains(i)).collect();
        // Diagonalize W in the orthonormal frame so ρ = Σ λ_e |w_e⟩⟨w_e|.
        let (q, c) = Self::orthonormal_frame(&self.vectors);
        let small = &c * &self.weights * c.adjoint();
        let eig = hermitian_eigen(&small);
        let d = self.trunc.dim();
        let nk = d.pow(idx.len() as u32);
        let mut out = DMatrix::<Complex64>::zeros(nk, nk);
        for e in 0..small.nrows() {
            let lam = eig.eigenvalues[e];
            if lam == 0.0 {
                continue;
            }
            let w = &q * eig.eigenvectors.column(e);
            let fv = FockVector::new(&self.modes, w.iter().copied().collect(), self.trunc)?;
            let m = reshape_bipartite(&fv, &idx, &rest);
            out += (&m * m.adjoint()) * Complex64::new(lam, 0.0);
        }
        let kept: Vec<&str> = idx.iter().map(|&i| self.modes[i].as_str()).collect();
        DensOp::new(&kept, out, self.trunc)
    }
}
