//! Operator-path description of the protocol, used as an independent oracle for
//! the network simulation.
//!
//! A click pattern with photon counts `n_1..n_K` acts on the probe through the
//! operators `Â^{(n_j)} = (q^{n_j}/√n_j!)(ĉ − γ_j)^{n_j}`. The probe state that
//! survives is then mapped by the superoperator
//! `M̂: |γ_x⟩⟨γ_y| ↦ ⟨·⟩ |γ′_0(γ_x)⟩⟨γ′_0(γ_y)| · e^{−q²Σ_j(|γ_x−γ_j|² + |γ_y−γ_j|²)/2}`
//! (the vacuum overlaps of the detector arms and the leftover probe amplitude
//! `γ′_0`), after which the probe is discarded.
//!
//! After the Kerr interactions the probe is `|γe^{iχN}⟩` on the `a+b = N`
//! photon-number sector `|Φ_N⟩` of `|α⟩|β⟩`. The operators are applied in the
//! Fock representation; the resulting probe state of sector `N` is `β_N|γe^{iχN}⟩`,
//! and `β_N` is read off numerically before `M̂` is applied.

use fock_core::{
    annihilation, apply_cross_kerr, apply_single_mode, coherent_amplitudes_unchecked, coherent_overlap, coherent_tail,
    FockVector, MixedState, TruncationSpec,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use scheme_design::probe_output;

use crate::analytic::analytic_target_state;
use crate::error::{ProtocolError, Result};
use crate::network::run_full_protocol;
use crate::params::ProtocolParams;

/// Default photon-count cutoff per detector for the summed operator path.
pub const DEFAULT_N_CUT: usize = 3;

/// Sectors whose squared norm is below this are dropped.
const NEGLIGIBLE_SECTOR: f64 = 1e-30;

/// Elimination operator `(q^n/√n!)(ĉ − γ_j)^n` as a `dim × dim` Fock matrix.
pub fn elimination_operator(dim: usize, root: Complex64, n: usize, q: f64) -> DMatrix<Complex64> {
    let shifted = annihilation(dim) - DMatrix::<Complex64>::identity(dim, dim) * root;
    let mut op = DMatrix::<Complex64>::identity(dim, dim);
    let mut fact = 1.0;
    for k in 1..=n {
        op = &shifted * op;
        fact *= k as f64;
    }
    op * Complex64::new(q.powi(n as i32) / fact.sqrt(), 0.0)
}

/// Probe photon-number sectors and the per-sector probe amplitude.
struct Sectors {
    /// Total photon number `N = n_a + n_b` of each retained sector.
    n: Vec<usize>,
    /// `|Φ_N⟩` over the main cutoff (unnormalized sector of `|α⟩|β⟩`).
    phi: Vec<FockVector>,
    /// `γe^{iχN}`.
    g: Vec<Complex64>,
}

/// Cutoff for the three-mode state: the main-mode cutoff, raised so that the
/// probe keeps every amplitude above 1e-30 even after `max_lowering` applications
/// of `ĉ`.
fn operator_trunc(params: &ProtocolParams, max_lowering: usize) -> Result<TruncationSpec> {
    let mut n = 0;
    while coherent_tail(params.gamma.norm(), n) > 1e-30 {
        n += 1;
    }
    let n_max = params.trunc.n_max().max(n + max_lowering + 2);
    Ok(params.trunc.with_n_max(n_max)?)
}

/// Extracts `β_N` for every sector from a three-mode state of the form
/// `Σ_N |Φ_N⟩ ⊗ β_N|γe^{iχN}⟩` (modes `a, b, c`, big cutoff `big`).
fn extract_sector_amplitudes(
    state: &FockVector,
    phi_big: &[Vec<(usize, Complex64)>],
    g: &[Complex64],
    big: TruncationSpec,
) -> Vec<Complex64> {
    let d = big.dim();
    let amps = state.amplitudes();
    phi_big
        .iter()
        .zip(g)
        .map(|(entries, &gn)| {
            let norm: f64 = entries.iter().map(|(_, p)| p.norm_sqr()).sum();
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            for &(ab, p) in entries {
                for (c, slot) in v.iter_mut().enumerate() {
                    *slot += p.conj() * amps[ab * d + c];
                }
            }
            let coh = coherent_amplitudes_unchecked(gn, big.n_max());
            let proj: Complex64 = coh.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            let cn: f64 = coh.iter().map(|x| x.norm_sqr()).sum();
            proj / (norm * cn)
        })
        .collect()
}

/// Sector decomposition of `|α⟩|β⟩` in the main cutoff, plus the flat `(ab, Φ)`
/// entries of every sector in the enlarged cutoff `big`.
/// Flat `(index, amplitude)` entries of one sector.
type SparseSector = Vec<(usize, Complex64)>;

fn sectors(params: &ProtocolParams, big: TruncationSpec) -> Result<(Sectors, Vec<SparseSector>)> {
    let small = params.trunc;
    let qa = coherent_amplitudes_unchecked(params.alpha, big.n_max());
    let qb = coherent_amplitudes_unchecked(params.beta, big.n_max());
    let (ds, db) = (small.dim(), big.dim());
    let mut out = Sectors {
        n: Vec::new(),
        phi: Vec::new(),
        g: Vec::new(),
    };
    let mut entries_big = Vec::new();
    for n in 0..=2 * small.n_max() {
        let mut amps = vec![Complex64::new(0.0, 0.0); ds * ds];
        let mut entries = Vec::new();
        let mut norm = 0.0;
        for a in n.saturating_sub(big.n_max())..=n.min(big.n_max()) {
            let b = n - a;
            let p = qa[a] * qb[b];
            entries.push((a * db + b, p));
            if a < ds && b < ds {
                amps[a * ds + b] = p;
                norm += p.norm_sqr();
            }
        }
        if norm < NEGLIGIBLE_SECTOR {
            continue;
        }
        out.n.push(n);
        out.phi.push(FockVector::new(&["a", "b"], amps, small)?);
        out.g
            .push(params.gamma * Complex64::from_polar(1.0, params.chi * n as f64));
        entries_big.push(entries);
    }
    Ok((out, entries_big))
}

/// `|Ψ₁⟩_{abc}` in the enlarged cutoff.
fn kerr_state_big(params: &ProtocolParams, big: TruncationSpec) -> Result<FockVector> {
    let d = big.dim();
    let qa = coherent_amplitudes_unchecked(params.alpha, big.n_max());
    let qb = coherent_amplitudes_unchecked(params.beta, big.n_max());
    let qc = coherent_amplitudes_unchecked(params.gamma, big.n_max());
    let factors = [qa, qb, qc];
    let psi = FockVector::product(&["a", "b", "c"], &factors, big)?;
    debug_assert_eq!(psi.len(), d * d * d);
    let psi = apply_cross_kerr(&psi, "a", "c", params.chi)?;
    Ok(apply_cross_kerr(&psi, "b", "c", params.chi)?)
}

fn check_counts(params: &ProtocolParams, roots: &[Complex64], counts: &[usize]) -> Result<()> {
    if counts.len() != roots.len() || roots.len() != params.k() {
        return Err(ProtocolError::InvalidParameter(format!(
            "need one photon count per detector ({}), got {} counts for {} roots",
            params.k(),
            counts.len(),
            roots.len()
        )));
    }
    if counts.contains(&0) {
        return Err(ProtocolError::InvalidParameter("photon counts must be >= 1".into()));
    }
    Ok(())
}

/// Sector amplitudes `β_N` after applying `Π_j Â^{(n_j)}` (with the given root
/// order) to `|Ψ₁⟩` in the Fock representation.
fn sector_amplitudes(
    params: &ProtocolParams,
    roots: &[Complex64],
    counts: &[usize],
    psi: &FockVector,
    entries: &[Vec<(usize, Complex64)>],
    sec: &Sectors,
) -> Result<Vec<Complex64>> {
    let big = *psi.trunc();
    let mut state = psi.clone();
    for (&root, &n) in roots.iter().zip(counts) {
        state = apply_single_mode(&state, "c", &elimination_operator(big.dim(), root, n, params.scheme.q))?;
    }
    Ok(extract_sector_amplitudes(&state, entries, &sec.g, big))
}

/// Probe-independent part of the state: `Σ_N β_N |Φ_N⟩` for one photon-count
/// pattern, i.e. the operators applied to `|Ψ₁⟩` with the probe then projected
/// on its coherent sector state (no arm-vacuum factors, no `M̂`).
///
/// For counts `(1,…,1)` this is `(qγ)^K Π_j(F̂ − γ_j/γ)|α⟩|β⟩` with
/// `F̂ = e^{iχ(n_a+n_b)}`.
pub fn operator_path_pure_term(params: &ProtocolParams, counts: &[usize]) -> Result<FockVector> {
    let roots = params.scheme.roots.expanded();
    check_counts(params, &roots, counts)?;
    let big = operator_trunc(params, counts.iter().sum())?;
    let (sec, entries) = sectors(params, big)?;
    let psi = kerr_state_big(params, big)?;
    let beta = sector_amplitudes(params, &roots, counts, &psi, &entries, &sec)?;
    let d = params.trunc.dim();
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    for (phi, b) in sec.phi.iter().zip(&beta) {
        for (slot, p) in acc.iter_mut().zip(phi.amplitudes()) {
            *slot += b * p;
        }
    }
    Ok(FockVector::new(&["a", "b"], acc, params.trunc)?)
}

/// Weight matrix of `M̂` acting on the sector mixture with amplitudes `β`
/// (one vector of `β_N` per photon-count pattern).
fn m_hat_weights(
    params: &ProtocolParams,
    roots: &[Complex64],
    sec: &Sectors,
    betas: &[Vec<Complex64>],
) -> DMatrix<Complex64> {
    let s = &params.scheme;
    let q2 = s.q * s.q;
    let env: Vec<f64> = sec
        .g
        .iter()
        .map(|g| (-q2 * roots.iter().map(|r| (g - r).norm_sqr()).sum::<f64>() / 2.0).exp())
        .collect();
    let out0: Vec<Complex64> = sec.g.iter().map(|&g| probe_output(g, roots, s.q, s.delta)).collect();
    let r = sec.n.len();
    DMatrix::from_fn(r, r, |i, j| {
        let coh: Complex64 = betas.iter().map(|b| b[i] * b[j].conj()).sum();
        coh * env[i] * env[j] * coherent_overlap(out0[j], out0[i])
    })
}

/// Sub-normalized final state of modes `a, b` for detector photon counts
/// `n_1..n_K` (all ≥ 1) with the roots taken in the order given.
pub fn operator_path_final_state_with_roots(
    params: &ProtocolParams,
    roots: &[Complex64],
    counts: &[usize],
) -> Result<MixedState> {
    operator_path_sum_with_roots(params, roots, &[counts.to_vec()])
}

/// Sub-normalized final state of modes `a, b` for detector photon counts `n_1..n_K`.
pub fn operator_path_final_state(params: &ProtocolParams, counts: &[usize]) -> Result<MixedState> {
    operator_path_final_state_with_roots(params, &params.scheme.roots.expanded(), counts)
}

/// Sum of the operator-path states over the given photon-count patterns.
pub fn operator_path_sum_with_roots(
    params: &ProtocolParams,
    roots: &[Complex64],
    patterns: &[Vec<usize>],
) -> Result<MixedState> {
    for counts in patterns {
        check_counts(params, roots, counts)?;
    }
    let lowering = patterns.iter().map(|c| c.iter().sum::<usize>()).max().unwrap_or(0);
    let big = operator_trunc(params, lowering)?;
    let (sec, entries) = sectors(params, big)?;
    let psi = kerr_state_big(params, big)?;
    let betas = patterns
        .iter()
        .map(|counts| sector_amplitudes(params, roots, counts, &psi, &entries, &sec))
        .collect::<Result<Vec<_>>>()?;
    let w = m_hat_weights(params, roots, &sec, &betas);
    Ok(MixedState::new(&sec.phi, w)?)
}

/// All photon-count patterns with every count in `1..=n_cut`.
pub fn count_patterns(k: usize, n_cut: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=n_cut).map(move |n| {
                    let mut q = p.clone();
                    q.push(n);
                    q
                })
            })
            .collect();
    }
    out
}

/// All-click state along the operator path: the sum over photon counts
/// `1..=n_cut` per detector (sub-normalized; its trace is the success probability
/// up to the omitted counts).
pub fn operator_path_state(params: &ProtocolParams, n_cut: usize) -> Result<MixedState> {
    if n_cut == 0 {
        return Err(ProtocolError::InvalidParameter("n_cut must be >= 1".into()));
    }
    operator_path_sum_with_roots(
        params,
        &params.scheme.roots.expanded(),
        &count_patterns(params.k(), n_cut),
    )
}

/// Agreement between the network simulation and the operator path.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// Trace distance between the normalized all-click states of both paths.
    pub trace_distance: f64,
    /// Trace distance between the simulated all-click state and the ideal target.
    pub residual: f64,
    /// All-click probability of the network simulation.
    pub probability_full: f64,
    /// Trace of the operator-path state.
    pub probability_operator: f64,
}

/// Compares both simulation paths for the all-click outcome.
pub fn oracle_equivalence(params: &ProtocolParams, n_cut: usize) -> Result<OracleReport> {
    let records = run_full_protocol(params)?;
    let full = records
        .iter()
        .find(|r| r.is_all_click())
        .expect("the all-click pattern is always present");
    let op = operator_path_state(params, n_cut)?;
    let probability_operator = op.trace();
    let trace_distance = full.state.trace_distance(&op.normalized())?;
    let target = analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc)?;
    let residual = full.state.trace_distance(&MixedState::pure(&target))?;
    Ok(OracleReport {
        trace_distance,
        residual,
        probability_full: full.probability,
        probability_operator,
    })
}

/// Two-point scaling exponent `log₂(r(γ)/r(γ/2))` of the all-click residual
/// with respect to the ideal target, together with both reports.
pub fn residual_scaling(params: &ProtocolParams, n_cut: usize) -> Result<(f64, OracleReport, OracleReport)> {
    let at = oracle_equivalence(params, n_cut)?;
    let half = oracle_equivalence(&params.with_gamma(params.gamma / 2.0)?, n_cut)?;
    Ok(((at.residual / half.residual).log2(), at, half))
}
