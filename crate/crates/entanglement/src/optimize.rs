//! Maximization of the entanglement entropy over the target coefficients.
//!
//! The search runs over the coordinates `u` of the state in an orthonormal basis
//! of the span of the coherent pairs, `c = U Λ^{-1/2} u` with `G_a ∘ G_b = U Λ U⁺`.
//! Nearly coalescent coherent states make the coefficient landscape extremely
//! ill-conditioned (the useful states are tiny differences of large terms),
//! while in `u` the optimum is an ordinary unit vector. Directions with
//! `λ < 1e-14·λ_max` are not resolvable and are left out. Each restart runs a
//! Nelder–Mead search from a random `u`; the best restart is polished with a
//! fresh small simplex, and the result is reported in the gauge `c_0 = 1`.
//!
//! Where the coherent states are almost orthogonal, the entropy no longer
//! depends on the relative phases of the coefficients, so the maximizer is not
//! unique. A second stage then minimizes `−E + μ·T(c)` (default `μ = 1e-6`) from
//! the best point, which selects among such degenerate maxima the phases with
//! maximal destructive interference between neighbouring coherent pairs:
//! `T(c) = Σ_n Re(c_n* c_{n+1} e^{iθ}) / (|c_n||c_{n+1}|)` with
//! `θ = arg(⟨αe^{iχn}|αe^{iχ(n+1)}⟩⟨βe^{iχn}|βe^{iχ(n+1)}⟩)`. Only phases enter,
//! so `T` stays effective when the overlaps themselves vanish. The second stage
//! is kept only if it lowers the entropy by less than 1e-10.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use fock_core::hermitian_eigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::{schmidt_probabilities, EntanglementReport};
use crate::error::{EntanglementError, Result};
use crate::gram::GramPair;

/// Settings of the multi-start search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Number of random restarts.
    pub restarts: usize,
    /// Seed of the restart generator (restart `i` uses `seed + i`).
    pub seed: u64,
    /// Iteration budget per Nelder–Mead run.
    pub max_iters: u64,
    /// Standard-deviation tolerance of the simplex cost values.
    pub sd_tolerance: f64,
    /// Weight of the phase tie-break term (0 disables the second stage).
    pub tie_break: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0x5eed_e17a,
            max_iters: 20_000,
            sd_tolerance: 1e-13,
            tie_break: 1e-6,
        }
    }
}

/// Largest entropy loss accepted from the tie-break stage.
const TIE_BREAK_MAX_LOSS: f64 = 1e-10;

/// Entropy rounding noise per unit of `√cond(G_a ∘ G_b)`.
const ENTROPY_NOISE: f64 = 1e-16;

/// Relative floor below which pair-Gram directions are not searched.
const SPAN_FLOOR: f64 = 1e-14;

/// Map from orthonormal span coordinates to coefficients, `c = B u`.
struct SpanBasis {
    /// `(K+1) × r` matrix `U Λ^{-1/2}` restricted to the resolvable directions.
    b: DMatrix<Complex64>,
    /// Condition number of the retained part of the pair Gram matrix.
    condition: f64,
}

impl SpanBasis {
    fn new(gram: &GramPair) -> Self {
        let eig = hermitian_eigen(&gram.pair_gram());
        let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&e| eig.eigenvalues[e] > SPAN_FLOOR * max)
            .collect();
        let n = gram.dim();
        let b = DMatrix::from_fn(n, keep.len(), |r, col| {
            let e = keep[col];
            eig.eigenvectors[(r, e)] / eig.eigenvalues[e].sqrt()
        });
        let min = keep.iter().map(|&e| eig.eigenvalues[e]).fold(f64::INFINITY, f64::min);
        Self {
            b,
            condition: max / min,
        }
    }

    /// Real parameters: `u_0` is real (phase gauge), the rest complex.
    fn params(&self) -> usize {
        2 * self.b.ncols() - 1
    }

    fn span_coords(p: &[f64]) -> DVector<Complex64> {
        DVector::from_iterator(
            p.len().div_ceil(2),
            std::iter::once(Complex64::new(p[0], 0.0)).chain(p[1..].chunks(2).map(|x| Complex64::new(x[0], x[1]))),
        )
    }

    fn coeffs(&self, p: &[f64]) -> Vec<Complex64> {
        (&self.b * Self::span_coords(p)).iter().copied().collect()
    }
}

struct Objective<'a> {
    gram: &'a GramPair,
    basis: &'a SpanBasis,
    /// Phase of the nearest-neighbour pair overlap.
    theta: f64,
    tie_break: f64,
}

/// Rescales `c` to the gauge `c_0 = 1` (or, if `c_0` vanishes, to a unit largest entry).
fn gauge_fixed(c: &[Complex64]) -> Vec<Complex64> {
    let max = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let pivot = if c[0].norm() > 1e-12 * max {
        c[0]
    } else {
        *c.iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("non-empty")
    };
    c.iter().map(|x| x / pivot).collect()
}

fn entropy(gram: &GramPair, c: &[Complex64]) -> f64 {
    schmidt_probabilities(gram, c)
        .map(|s| fock_core::entropy_bits(&s))
        .unwrap_or(0.0)
}

/// Tie-break term `T(c)` (see module docs).
pub fn interference_phase_term(c: &[Complex64], theta: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, theta);
    c.windows(2)
        .filter(|w| w[0].norm() > 0.0 && w[1].norm() > 0.0)
        .map(|w| (w[0].conj() * w[1] * rot).re / (w[0].norm() * w[1].norm()))
        .sum()
}

impl Objective<'_> {
    fn norm_sqr(p: &[f64]) -> f64 {
        p.iter().map(|x| x * x).sum()
    }
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, ArgminError> {
        let c = self.basis.coeffs(p);
        let penalty = if self.tie_break > 0.0 {
            self.tie_break * interference_phase_term(&c, self.theta)
        } else {
            0.0
        };
        // The entropy is scale invariant; this pins the scale without moving any optimum.
        let scale = (Self::norm_sqr(p) - 1.0).powi(2);
        Ok(-entropy(self.gram, &c) + penalty + scale)
    }
}

struct RunResult {
    param: Vec<f64>,
    cost: f64,
    converged: bool,
}

fn nelder_mead(obj: Objective<'_>, start: &[f64], step: f64, cfg: &OptimizerConfig) -> Result<RunResult> {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let fail = |e: ArgminError| EntanglementError::InvalidParameter(format!("optimizer setup failed: {e}"));
    // Rounding noise of the entropy grows with the conditioning of the span basis.
    let tol = cfg.sd_tolerance.max(ENTROPY_NOISE * obj.basis.condition.sqrt());
    let solver = NelderMead::new(simplex).with_sd_tolerance(tol).map_err(fail)?;
    let res = Executor::new(obj, solver)
        .configure(|s| s.max_iters(cfg.max_iters))
        .run()
        .map_err(fail)?;
    let state = res.state();
    let converged = matches!(
        state.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    Ok(RunResult {
        param: state.get_best_param().cloned().unwrap_or_else(|| start.to_vec()),
        cost: state.get_best_cost(),
        converged,
    })
}

/// Coefficients maximizing the entanglement of `Σ_{n=0}^{K} c_n |αe^{iχn}⟩|βe^{iχn}⟩`
/// with the default settings.
pub fn optimize_coefficients(k: usize, alpha: Complex64, beta: Complex64, chi: f64) -> Result<EntanglementReport> {
    optimize_coefficients_with(k, alpha, beta, chi, &OptimizerConfig::default())
}

/// As [`optimize_coefficients`] with explicit settings.
pub fn optimize_coefficients_with(
    k: usize,
    alpha: Complex64,
    beta: Complex64,
    chi: f64,
    cfg: &OptimizerConfig,
) -> Result<EntanglementReport> {
    if k < 1 {
        return Err(EntanglementError::InvalidParameter("K must be >= 1".into()));
    }
    if cfg.restarts < 1 {
        return Err(EntanglementError::InvalidParameter("need at least one restart".into()));
    }
    let gram = GramPair::new(alpha, beta, chi, k);
    let basis = SpanBasis::new(&gram);
    let theta = (gram.g_a[(0, 1)] * gram.g_b[(0, 1)]).arg();
    let objective = |tie_break: f64| Objective {
        gram: &gram,
        basis: &basis,
        theta,
        tie_break,
    };
    let dim = basis.params();
    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            nelder_mead(objective(0.0), &start, 0.3, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = runs
        .into_iter()
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .expect("at least one restart");
    let polished = nelder_mead(objective(0.0), &best.param, 1e-3, cfg)?;
    if polished.cost <= best.cost {
        best = RunResult {
            converged: polished.converged || best.converged,
            ..polished
        };
    }
    let e_best = -best.cost;
    if cfg.tie_break > 0.0 {
        let tied = nelder_mead(objective(cfg.tie_break), &best.param, 1e-2, cfg)?;
        if entropy(&gram, &basis.coeffs(&tied.param)) >= e_best - TIE_BREAK_MAX_LOSS {
            best = RunResult {
                converged: best.converged && tied.converged,
                ..tied
            };
        }
    }
    let c = gauge_fixed(&basis.coeffs(&best.param));
    let schmidt = schmidt_probabilities(&gram, &c)?;
    let report = EntanglementReport {
        entropy: fock_core::entropy_bits(&schmidt),
        schmidt,
        c_opt: Some(c),
    };
    if !best.converged {
        return Err(EntanglementError::NonConvergence { best: Box::new(report) });
    }
    Ok(report)
}
