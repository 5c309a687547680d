//! Unitary gates, single-mode operators and click projectors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::state::FockVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Multiplies the amplitude at `(…, n_i, …, n_j, …)` by `e^{iχ·n_i·n_j}`.
pub fn apply_cross_kerr(state: &FockVector, mode_i: &str, mode_j: &str, chi: f64) -> Result<FockVector> {
    let i = state.mode_index(mode_i)?;
    let j = state.mode_index(mode_j)?;
    let mut out = state.clone();
    let d = state.trunc().dim();
    let (si, sj) = (state.stride(i), state.stride(j));
    let bases = state.base_offsets(&[i, j]);
    let amps = out.amplitudes_mut();
    for ni in 0..d {
        for nj in 0..d {
            // With i == j the operator is the self-Kerr exp(iχ n²); only the diagonal exists.
            if i == j && ni != nj {
                continue;
            }
            let phase = Complex64::from_polar(1.0, chi * (ni * nj) as f64);
            let off = if i == j { ni * si } else { ni * si + nj * sj };
            for &b in &bases {
                amps[b + off] *= phase;
            }
        }
    }
    Ok(out)
}

/// Phase shift `e^{iφ n̂}` on one mode.
pub fn apply_phase(state: &FockVector, mode: &str, phi: f64) -> Result<FockVector> {
    let m = state.mode_index(mode)?;
    let mut out = state.clone();
    let s = state.stride(m);
    let bases = state.base_offsets(&[m]);
    let amps = out.amplitudes_mut();
    for n in 1..state.trunc().dim() {
        let phase = Complex64::from_polar(1.0, phi * n as f64);
        for &b in &bases {
            amps[b + n * s] *= phase;
        }
    }
    Ok(out)
}

/// Applies a single-mode operator given as a `dim × dim` matrix.
pub fn apply_single_mode(state: &FockVector, mode: &str, op: &DMatrix<Complex64>) -> Result<FockVector> {
    let m = state.mode_index(mode)?;
    let d = state.trunc().dim();
    if op.nrows() != d || op.ncols() != d {
        return Err(FockError::ShapeMismatch(format!(
            "operator is {}x{}, mode dimension is {d}",
            op.nrows(),
            op.ncols()
        )));
    }
    let s = state.stride(m);
    let bases = state.base_offsets(&[m]);
    let src = state.amplitudes();
    let mut out = vec![ZERO; src.len()];
    let mut column = vec![ZERO; d];
    for &b in &bases {
        for (n, slot) in column.iter_mut().enumerate() {
            *slot = src[b + n * s];
        }
        if column.iter().all(|c| *c == ZERO) {
            continue;
        }
        for r in 0..d {
            let mut acc = ZERO;
            for (c, v) in column.iter().enumerate() {
                acc += op[(r, c)] * v;
            }
            out[b + r * s] = acc;
        }
    }
    state.with_amplitudes(out)
}

/// Annihilation operator `â` on a `dim`-level truncated mode.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Creation operator `â⁺` on a `dim`-level truncated mode.
pub fn creation(dim: usize) -> DMatrix<Complex64> {
    annihilation(dim).adjoint()
}

/// Eigen-decompositions of the per-photon-number blocks of `ĉ⁺d̂ + ĉd̂⁺`,
/// computed on first use and shared between calls with the same cutoff (the
/// blocks depend on nothing else).
struct BsBlocks {
    /// Block `s` acts on `|k, s−k⟩`, `k = 0..=s`.
    eig: Vec<OnceLock<SymmetricEigen<f64, nalgebra::Dyn>>>,
}

impl BsBlocks {
    fn block(&self, s: usize) -> &SymmetricEigen<f64, nalgebra::Dyn> {
        self.eig[s].get_or_init(|| {
            let h = DMatrix::<f64>::from_fn(s + 1, s + 1, |r, c| {
                if r == c + 1 {
                    ((c + 1) as f64).sqrt() * ((s - c) as f64).sqrt()
                } else if c == r + 1 {
                    ((r + 1) as f64).sqrt() * ((s - r) as f64).sqrt()
                } else {
                    0.0
                }
            });
            SymmetricEigen::new(h)
        })
    }
}

fn bs_blocks(n_max: usize) -> Arc<BsBlocks> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BsBlocks>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache
        .lock()
        .expect("beamsplitter cache poisoned")
        .entry(n_max)
        .or_insert_with(|| {
            Arc::new(BsBlocks {
                eig: (0..=2 * n_max).map(|_| OnceLock::new()).collect(),
            })
        })
        .clone()
}

/// Blocks whose input squared norm is below this are left at zero: the dropped
/// amplitude is < 1e-20, far under every tolerance, and skipping them keeps the
/// cost proportional to the populated part of the space.
const NEGLIGIBLE_BLOCK_NORM_SQR: f64 = 1e-40;

fn block_unitary(eig: &SymmetricEigen<f64, nalgebra::Dyn>, kmin: usize, w: usize, theta: f64) -> DMatrix<Complex64> {
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, theta * l))
        .collect();
    DMatrix::from_fn(w, w, |r, c| {
        let mut acc = ZERO;
        for (e, ph) in phases.iter().enumerate() {
            acc += ph * (eig.eigenvectors[(kmin + r, e)] * eig.eigenvectors[(kmin + c, e)]);
        }
        acc
    })
}

/// Two-mode beamsplitter `exp{iθ(â_i⁺â_j + â_i â_j⁺)}`.
///
/// Coherent inputs obey `|u⟩|v⟩ → |u cosθ + i v sinθ⟩|v cosθ + i u sinθ⟩`.
/// The exponential is exact on every fixed-total-photon-number block; any
/// probability that would land above `n_max` in either mode is reported as
/// [`FockError::TruncationOverflow`] when it exceeds the truncation tolerance.
pub fn apply_beamsplitter(state: &FockVector, mode_i: &str, mode_j: &str, theta: f64) -> Result<FockVector> {
    let i = state.mode_index(mode_i)?;
    let j = state.mode_index(mode_j)?;
    if i == j {
        return Err(FockError::ShapeMismatch("beamsplitter needs two distinct modes".into()));
    }
    let trunc = *state.trunc();
    let n_max = trunc.n_max();
    let blocks = bs_blocks(n_max);
    let (si, sj) = (state.stride(i), state.stride(j));
    let bases = state.base_offsets(&[i, j]);
    let src = state.amplitudes();
    let mut out = vec![ZERO; src.len()];
    let mut leak = 0.0;

    for s in 0..=2 * n_max {
        let kmin = s.saturating_sub(n_max);
        let kmax = s.min(n_max);
        let w = kmax - kmin + 1;
        // U = V·diag(e^{iθλ})·Vᵀ restricted to the in-range rows and columns,
        // built only once some spectator slice actually populates this block.
        let mut u: Option<DMatrix<Complex64>> = None;
        let mut x = vec![ZERO; w];
        for &b in &bases {
            let mut in_norm = 0.0;
            for (c, slot) in x.iter_mut().enumerate() {
                let k = kmin + c;
                *slot = src[b + k * si + (s - k) * sj];
                in_norm += slot.norm_sqr();
            }
            if in_norm <= NEGLIGIBLE_BLOCK_NORM_SQR {
                continue;
            }
            let u = u.get_or_insert_with(|| block_unitary(blocks.block(s), kmin, w, theta));
            let mut out_norm = 0.0;
            for r in 0..w {
                let mut acc = ZERO;
                for (c, v) in x.iter().enumerate() {
                    acc += u[(r, c)] * v;
                }
                out_norm += acc.norm_sqr();
                let k = kmin + r;
                out[b + k * si + (s - k) * sj] = acc;
            }
            leak += (in_norm - out_norm).max(0.0);
        }
    }
    if leak > trunc.tail_tol() {
        return Err(FockError::TruncationOverflow {
            leak,
            n_max,
            tol: trunc.tail_tol(),
        });
    }
    state.with_amplitudes(out)
}

/// Extra levels used internally by [`displacement_matrix`] so that the
/// truncated generator's boundary never influences the retained block.
fn displacement_padding(abs_d: f64, n_max: usize) -> usize {
    let pad = 2.0 * abs_d * abs_d + 12.0 * abs_d + 40.0;
    (pad.ceil() as usize).max(n_max / 2 + 40)
}

/// Matrix of `D(d) = exp(d â⁺ − d* â)` on the padded space `dim_p = n_max + 1 + pad`.
///
/// Uses `d â⁺ − d* â = −i·r·R(φ+π/2) (â + â⁺) R(φ+π/2)⁺` with `d = r e^{iφ}` and
/// `R(ϑ) = e^{iϑ n̂}`, so the exponential follows from the eigen-decomposition of
/// the real symmetric quadrature matrix `â + â⁺`.
fn displacement_padded(d: Complex64, dim_p: usize) -> DMatrix<Complex64> {
    let r = d.norm();
    let phi = d.arg() + std::f64::consts::FRAC_PI_2;
    let x = DMatrix::<f64>::from_fn(dim_p, dim_p, |a, b| {
        if a == b + 1 {
            (a as f64).sqrt()
        } else if b == a + 1 {
            (b as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(x);
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -r * l))
        .collect();
    DMatrix::from_fn(dim_p, dim_p, |a, b| {
        let mut acc = ZERO;
        for (e, ph) in phases.iter().enumerate() {
            acc += ph * (eig.eigenvectors[(a, e)] * eig.eigenvectors[(b, e)]);
        }
        acc * Complex64::from_polar(1.0, phi * (a as f64 - b as f64))
    })
}

/// Displacement `D(d) = exp(d â⁺ − d* â)` on one mode: `|z⟩ → e^{i Im(d z*)}|z + d⟩`.
///
/// The state is evolved in an internally padded space; probability pushed above
/// `n_max` beyond the truncation tolerance raises [`FockError::TruncationOverflow`].
pub fn apply_displacement(state: &FockVector, mode: &str, d: Complex64) -> Result<FockVector> {
    let m = state.mode_index(mode)?;
    if d == ZERO {
        return Ok(state.clone());
    }
    let trunc = *state.trunc();
    let dim = trunc.dim();
    let dim_p = dim + displacement_padding(d.norm(), trunc.n_max());
    let big = displacement_padded(d, dim_p);
    let s = state.stride(m);
    let bases = state.base_offsets(&[m]);
    let src = state.amplitudes();
    let mut out = vec![ZERO; src.len()];
    let mut leak = 0.0;
    let mut column = vec![ZERO; dim];
    for &b in &bases {
        for (n, slot) in column.iter_mut().enumerate() {
            *slot = src[b + n * s];
        }
        if column.iter().all(|c| *c == ZERO) {
            continue;
        }
        for r in 0..dim_p {
            let mut acc = ZERO;
            for (c, v) in column.iter().enumerate() {
                acc += big[(r, c)] * v;
            }
            if r < dim {
                out[b + r * s] = acc;
            } else {
                leak += acc.norm_sqr();
            }
        }
    }
    if leak > trunc.tail_tol() {
        return Err(FockError::TruncationOverflow {
            leak,
            n_max: trunc.n_max(),
            tol: trunc.tail_tol(),
        });
    }
    state.with_amplitudes(out)
}

/// Retained `dim × dim` block of the displacement operator (not unitary on the
/// truncated space; intended for states well inside the cutoff).
pub fn displacement_matrix(d: Complex64, dim: usize) -> DMatrix<Complex64> {
    let dim_p = dim + displacement_padding(d.norm(), dim.saturating_sub(1));
    displacement_padded(d, dim_p).view((0, 0), (dim, dim)).into_owned()
}

/// Non-photon-number-resolving detector projection on one mode:
/// `clicked = false` keeps `|0⟩⟨0|`, `clicked = true` keeps `1 − |0⟩⟨0|`.
/// The squared norm of the result is the outcome probability.
pub fn project_click(state: &FockVector, mode: &str, clicked: bool) -> Result<FockVector> {
    let m = state.mode_index(mode)?;
    let s = state.stride(m);
    let mut out = state.clone();
    let amps = out.amplitudes_mut();
    for b in state.base_offsets(&[m]) {
        if clicked {
            amps[b] = ZERO;
        } else {
            for n in 1..state.trunc().dim() {
                amps[b + n * s] = ZERO;
            }
        }
    }
    Ok(out)
}
