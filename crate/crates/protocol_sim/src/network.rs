//! Exact Fock-space simulation of the whole protocol: Kerr interactions, the
//! probe beamsplitter cascade with explicitly simulated reference beams, click
//! projections and the discarding of probe and reference modes.
//!
//! The probe is decomposed into photon-number components: after the Kerr
//! interactions `|Ψ₁⟩ = Σ_n |Ψ_n⟩_ab |n⟩_c`. Each `|n⟩_c` (together with the
//! reference beams) is pushed through the cascade separately, giving
//! `|O_n⟩_{c d₁…d_K}`; a click pattern `P` then leaves
//! `ρ_ab = Σ_{nn′} ⟨O_{n′}|P|O_n⟩ |Ψ_n⟩⟨Ψ_{n′}|`, a low-rank mixture.

use fock_core::{
    apply_beamsplitter, apply_cross_kerr, apply_displacement, apply_phase, coherent_amplitudes_unchecked,
    coherent_tail, schmidt_entropy, FockError, FockVector, MixedState, TruncationSpec,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use scheme_design::{angles, probe_output, DetectionScheme};

use crate::analytic::success_probability_ideal;
use crate::error::{ProtocolError, Result};
use crate::params::ProtocolParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bounds of the omitted probe probability. The actual tolerance is
/// `1e-16·p` for the leading-order success probability `p`, clamped to this
/// range: high probe photon numbers click with probability close to one, so the
/// omitted tail must be small relative to `p`, not just in absolute terms.
pub const PROBE_TAIL_TOL_RANGE: (f64, f64) = (1e-32, 1e-15);

/// Omitted-probe-probability tolerance for `params` (see [`PROBE_TAIL_TOL_RANGE`]).
pub fn probe_tail_tol(params: &ProtocolParams) -> f64 {
    let p = success_probability_ideal(
        &params.target,
        params.gamma,
        params.scheme.q,
        params.alpha,
        params.beta,
        params.chi,
    );
    (1e-16 * p).clamp(PROBE_TAIL_TOL_RANGE.0, PROBE_TAIL_TOL_RANGE.1)
}

/// Admissible leakage of the network simulation (per beamsplitter); guards
/// against cutoffs that are too small.
pub const NETWORK_TAIL_TOL: f64 = 1e-12;

/// Coherent-tail target used to size the network cutoff. Far below the leakage
/// guard: a reference beam truncated at tail `ε` leaves amplitude `~√ε` behind in
/// its arm after interference, which matters for success probabilities far
/// below 1e-12.
pub const NETWORK_SIZING_TAIL: f64 = 1e-26;

/// Network cutoff for coherent amplitudes up to `amp` (plus `extra` photons).
fn network_trunc(amp: f64, extra: usize) -> Result<TruncationSpec> {
    let sized = TruncationSpec::for_amplitude(amp, NETWORK_SIZING_TAIL)?;
    Ok(TruncationSpec::new(sized.n_max() + extra, NETWORK_TAIL_TOL)?)
}

/// Largest network cutoff attempted before giving up.
pub const MAX_NETWORK_CUTOFF: usize = 400;

/// Post-selected result for one click pattern.
#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    /// `pattern[j]` is true when detector `j+1` fired.
    pub pattern: Vec<bool>,
    /// Outcome probability.
    pub probability: f64,
    /// State of modes `a`, `b`: normalized when `probability > 0`, otherwise the zero operator.
    pub state: MixedState,
}

impl OutcomeRecord {
    pub fn is_all_click(&self) -> bool {
        self.pattern.iter().all(|&c| c)
    }

    /// Pattern as a string of `1` (click) and `0` (silent), detector 1 first.
    pub fn pattern_label(&self) -> String {
        self.pattern.iter().map(|&c| if c { '1' } else { '0' }).collect()
    }

    /// Entanglement entropy (bits) of the dominant eigenvector of the state.
    pub fn entanglement(&self) -> Result<f64> {
        if self.probability <= 0.0 {
            return Ok(0.0);
        }
        let spectral = self.state.spectral()?;
        Ok(schmidt_entropy(&spectral[0].1, &["a"])?)
    }
}

/// Detector mode names `d1..dK`.
pub fn detector_modes(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("d{j}")).collect()
}

/// `|α⟩_a|β⟩_b|γ⟩_c` after the cross-Kerr interactions of `a` and `b` with `c`.
pub fn kerr_state(params: &ProtocolParams) -> Result<FockVector> {
    let psi = FockVector::coherent_product(
        &["a", "b", "c"],
        &[params.alpha, params.beta, params.gamma],
        params.trunc,
    )?;
    let psi = apply_cross_kerr(&psi, "a", "c", params.chi)?;
    Ok(apply_cross_kerr(&psi, "b", "c", params.chi)?)
}

/// One photon-number component of the probe after the Kerr interactions:
/// `|Ψ₁⟩ = Σ_n Q_n(γ) |Ψ_n⟩_ab |n⟩_c` with `|Ψ_n⟩ = |αe^{iχn}⟩|βe^{iχn}⟩`.
#[derive(Debug, Clone)]
pub struct ProbeComponent {
    /// Probe photon number `n`.
    pub n: usize,
    /// Probe amplitude `Q_n(γ)`.
    pub weight: Complex64,
    /// Normalized (to truncation) state of modes `a`, `b` given `n` probe photons.
    pub state: FockVector,
}

/// Probe components up to the smallest `n` whose omitted probability is below
/// [`probe_tail_tol`]. On the `n`-photon probe sector the cross-Kerr
/// interactions reduce to phase shifts `e^{iχn n̂_a}`, `e^{iχn n̂_b}`.
pub fn probe_components(params: &ProtocolParams) -> Result<Vec<ProbeComponent>> {
    let tol = probe_tail_tol(params);
    let mut n_c = 0;
    while coherent_tail(params.gamma.norm(), n_c) > tol {
        n_c += 1;
    }
    let q = coherent_amplitudes_unchecked(params.gamma, n_c);
    let base = FockVector::coherent_product(&["a", "b"], &[params.alpha, params.beta], params.trunc)?;
    (0..=n_c)
        .filter(|&n| q[n].norm() > 0.0)
        .map(|n| {
            let phase = params.chi * n as f64;
            let state = apply_phase(&apply_phase(&base, "a", phase)?, "b", phase)?;
            Ok(ProbeComponent { n, weight: q[n], state })
        })
        .collect()
}

/// Reference beams `|γ̃_1⟩…|γ̃_K⟩` produced by simulating the reference-splitting
/// network on a single master beam: beamsplitters `T′_j` and phase shifters `φ_j`,
/// with the last arm taking everything that is left. The master mode ends in
/// vacuum; its vacuum slice is returned as a state of `d1..dK`.
pub fn reference_beams(scheme: &DetectionScheme, trunc: TruncationSpec) -> Result<FockVector> {
    let k = scheme.k();
    let names: Vec<String> = std::iter::once("r".to_string()).chain(detector_modes(k)).collect();
    let mut zs = vec![Complex64::new(0.0, 0.0); k + 1];
    zs[0] = scheme.ref_net.gtilde_master;
    let mut state = FockVector::coherent_product(&names, &zs, trunc)?;
    for j in 0..k - 1 {
        let th = scheme.ref_net.tp[j].sqrt().clamp(0.0, 1.0).acos();
        state = apply_beamsplitter(&state, "r", &names[j + 1], th)?;
        state = apply_phase(&state, &names[j + 1], scheme.ref_net.phi[j])?;
    }
    state = apply_beamsplitter(&state, "r", &names[k], std::f64::consts::FRAC_PI_2)?;
    // Mode `r` is first (slowest index): its vacuum slice is the leading block.
    let block = trunc.dim().pow(k as u32);
    let amps = state.amplitudes()[..block].to_vec();
    Ok(FockVector::new(&names[1..], amps, trunc)?)
}

/// Pushes probe input `probe` (mode `c`) with reference beams `refs` (modes
/// `d1..dK`) through the cascade `T_1..T_K`.
fn cascade(scheme: &DetectionScheme, probe: &FockVector, refs: &FockVector) -> Result<FockVector> {
    let mut state = probe.tensor(refs)?;
    for (j, th) in angles(&scheme.t).iter().enumerate() {
        state = apply_beamsplitter(&state, "c", &format!("d{}", j + 1), *th)?;
    }
    Ok(state)
}

/// Starting cutoff for the network modes: large enough for the biggest coherent
/// amplitude that appears anywhere in the network, plus the probe photons.
fn initial_network_cutoff(params: &ProtocolParams, n_c: usize) -> Result<TruncationSpec> {
    let s = &params.scheme;
    let roots = s.roots.expanded();
    let mut amp = s.ref_net.gtilde_master.norm();
    for g in &s.gtilde {
        amp = amp.max(g.norm());
    }
    for n in 0..=n_c.max(1) * 8 {
        let gx = params.gamma * Complex64::from_polar(1.0, params.chi * n as f64);
        amp = amp.max(probe_output(gx, &roots, s.q, s.delta).norm());
    }
    network_trunc(amp, n_c)
}

/// Runs `f` with growing network cutoffs until no beamsplitter overflows.
fn with_adaptive_cutoff<T>(start: TruncationSpec, mut f: impl FnMut(TruncationSpec) -> Result<T>) -> Result<T> {
    let mut trunc = start;
    loop {
        match f(trunc) {
            Err(ProtocolError::Fock(FockError::TruncationOverflow { .. }))
            | Err(ProtocolError::Fock(FockError::TailTooHeavy { .. })) => {
                let next = (trunc.n_max() as f64 * 1.25).ceil() as usize;
                if next > MAX_NETWORK_CUTOFF {
                    return Err(ProtocolError::CutoffExhausted { n_max: trunc.n_max() });
                }
                log::debug!("network cutoff {} overflowed; retrying with {next}", trunc.n_max());
                trunc = trunc.with_n_max(next)?;
            }
            other => return other,
        }
    }
}

/// Probe input `Q_n(γ)|n⟩_c`; the weight also makes the truncation check
/// proportional to the component's actual probability.
fn probe_input(comp: &ProbeComponent, trunc: TruncationSpec) -> Result<FockVector> {
    Ok(FockVector::basis(&["c"], &[comp.n], trunc)?.scaled(comp.weight))
}

/// All `2^K` outcome records from the probe components and their network outputs
/// (`outs[i]` is the output for `components[i]`).
fn assemble(components: &[ProbeComponent], outs: &[FockVector], k: usize) -> Result<Vec<OutcomeRecord>> {
    let first = &outs[0];
    let d = first.trunc().dim();
    // Click class of every flat index: bit j set when detector j+1 has photons.
    let det_idx: Vec<usize> = (1..=k)
        .map(|j| first.mode_index(&format!("d{j}")))
        .collect::<fock_core::Result<_>>()?;
    let strides: Vec<usize> = det_idx.iter().map(|&i| first.stride(i)).collect();
    let class: Vec<u16> = (0..first.len())
        .map(|f| {
            strides
                .iter()
                .enumerate()
                .fold(0u16, |acc, (j, &s)| if (f / s) % d != 0 { acc | (1 << j) } else { acc })
        })
        .collect();
    let npat = 1usize << k;
    let r = outs.len();
    let mut w = vec![DMatrix::<Complex64>::zeros(r, r); npat];
    for i in 0..r {
        for j in i..r {
            let mut acc = vec![Complex64::new(0.0, 0.0); npat];
            for ((x, y), &cl) in outs[i].amplitudes().iter().zip(outs[j].amplitudes()).zip(&class) {
                acc[cl as usize] += y.conj() * x;
            }
            for (p, a) in acc.into_iter().enumerate() {
                w[p][(i, j)] = a;
                w[p][(j, i)] = a.conj();
            }
        }
    }
    // ρ = Σ W_{nn′} |Ψ_n⟩⟨Ψ_{n′}|; the probe amplitudes are already inside W.
    let vectors: Vec<FockVector> = components.iter().map(|c| c.state.clone()).collect();
    let mut records = Vec::with_capacity(npat);
    for (p, wp) in w.into_iter().enumerate() {
        let pattern: Vec<bool> = (0..k).map(|j| p & (1 << j) != 0).collect();
        let raw = MixedState::new(&vectors, wp)?;
        let probability = raw.trace().max(0.0);
        let state = if probability > 0.0 { raw.normalized() } else { raw };
        records.push(OutcomeRecord {
            pattern,
            probability,
            state,
        });
    }
    records.sort_by_key(OutcomeRecord::pattern_label);
    Ok(records)
}

/// Full protocol with explicitly simulated reference beams: one record per click
/// pattern, sorted by [`OutcomeRecord::pattern_label`].
pub fn run_full_protocol(params: &ProtocolParams) -> Result<Vec<OutcomeRecord>> {
    let components = probe_components(params)?;
    let n_c = components.last().map(|c| c.n).unwrap_or(0);
    let start = initial_network_cutoff(params, n_c)?;
    let outs = with_adaptive_cutoff(start, |trunc| {
        let refs = reference_beams(&params.scheme, trunc)?;
        components
            .par_iter()
            .map(|comp| cascade(&params.scheme, &probe_input(comp, trunc)?, &refs))
            .collect::<Result<Vec<_>>>()
    })?;
    assemble(&components, &outs, params.k())
}

/// Cheaper variant: the cascade runs with vacuum in the detector arms and each arm
/// is then displaced by `−iqγ_j`. The arm states are the same coherent amplitudes
/// up to a probe-dependent phase, so probabilities agree with
/// [`run_full_protocol`] while the states agree only to `1 − O(|γ|²)`.
pub fn run_displacement_protocol(params: &ProtocolParams) -> Result<Vec<OutcomeRecord>> {
    let components = probe_components(params)?;
    let s = &params.scheme;
    let k = params.k();
    let roots = s.roots.expanded();
    let n_c = components.last().map(|c| c.n).unwrap_or(0);
    let amp = roots
        .iter()
        .map(|g| s.q * (params.gamma.norm() + g.norm()))
        .fold(params.gamma.norm(), f64::max);
    let start = network_trunc(amp, n_c)?;
    let names = detector_modes(k);
    let outs = with_adaptive_cutoff(start, |trunc| {
        let zeros = vec![Complex64::new(0.0, 0.0); k];
        let vac = FockVector::coherent_product(&names, &zeros, trunc)?;
        components
            .par_iter()
            .map(|comp| {
                let mut out = cascade(s, &probe_input(comp, trunc)?, &vac)?;
                for (name, g) in names.iter().zip(&roots) {
                    out = apply_displacement(&out, name, -I * s.q * g)?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    assemble(&components, &outs, k)
}

/// Marginal click probability of every detector when the probe is prepared
/// directly in the coherent state `|probe⟩_c` (no Kerr interaction), with the
/// reference beams simulated explicitly.
pub fn probe_click_probabilities(scheme: &DetectionScheme, probe: Complex64) -> Result<Vec<f64>> {
    let k = scheme.k();
    let mut amp = scheme.ref_net.gtilde_master.norm().max(probe.norm());
    amp = amp.max(probe_output(probe, &scheme.roots.expanded(), scheme.q, scheme.delta).norm());
    let start = network_trunc(amp, 0)?;
    let out = with_adaptive_cutoff(start, |trunc| {
        let refs = reference_beams(scheme, trunc)?;
        let input = FockVector::coherent_product(&["c"], &[probe], trunc)?;
        cascade(scheme, &input, &refs)
    })?;
    let d = out.trunc().dim();
    (1..=k)
        .map(|j| {
            let idx = out.mode_index(&format!("d{j}"))?;
            let s = out.stride(idx);
            Ok(out
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(f, _)| (f / s) % d != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum())
        })
        .collect()
}

/// For every detector `j`, the probability that it fires when the probe is
/// exactly the state `|γ_j⟩` it is designed to eliminate (ideally zero).
pub fn elimination_soundness(scheme: &DetectionScheme) -> Result<Vec<f64>> {
    scheme
        .roots
        .expanded()
        .iter()
        .enumerate()
        .map(|(j, &g)| Ok(probe_click_probabilities(scheme, g)?[j]))
        .collect()
}
