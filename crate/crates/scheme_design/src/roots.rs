//! Elimination roots of the design polynomial `f(x) = Σ c_n (x/γ)ⁿ`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchemeError};
use crate::target::{poly_from_roots, TargetCoefficients};

/// Relative clustering radius for merging numerically split multiple roots.
pub const MERGE_TOL_REL: f64 = 1e-7;

/// One distinct root `γ_m` with its multiplicity `l_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub mult: usize,
}

/// Roots of the design polynomial scaled by the probe amplitude `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationRoots {
    pub roots: Vec<Root>,
    pub gamma: Complex64,
}

impl EliminationRoots {
    /// Total number of roots with multiplicity (= number of detectors).
    pub fn k(&self) -> usize {
        self.roots.iter().map(|r| r.mult).sum()
    }

    /// Roots repeated according to multiplicity, in detector order.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.mult))
            .collect()
    }

    /// Coefficients of `Π_j (x − γ_j/γ)` (monic, ascending powers).
    pub fn monic_coefficients(&self) -> Vec<Complex64> {
        let scaled: Vec<Complex64> = self.expanded().iter().map(|r| r / self.gamma).collect();
        poly_from_roots(&scaled)
    }
}

/// Relative radius within which separate eigenvalue clusters are tested for
/// being one multiple root.
const CANDIDATE_RADIUS_REL: f64 = 1e-3;

/// Arguments closer than this are treated as equal when ordering roots.
const ARG_TIE_TOL: f64 = 1e-9;

fn centroid(points: &[Complex64]) -> Complex64 {
    points.iter().sum::<Complex64>() / points.len() as f64
}

/// True when `y` is a root of multiplicity ≥ `mult` of `Σ c_n yⁿ` up to `tol`
/// (relative to the monic scale): `|p^{(s)}(y)/s!| ≤ tol` for all `s < mult`.
fn is_multiple_root(c: &[Complex64], lead: Complex64, y: Complex64, mult: usize, tol: f64) -> bool {
    let mut p: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let mut fact = 1.0;
    for s in 0..mult {
        if s > 0 {
            p = poly_derivative(&p);
            fact *= s as f64;
        }
        if poly_eval(&p, y).norm() / fact > tol * y.norm().max(1.0).powi((c.len() - 1 - s) as i32) {
            return false;
        }
    }
    true
}

/// Evaluates `Σ c_n yⁿ` (Horner).
pub fn poly_eval(c: &[Complex64], y: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * y + a)
}

/// Coefficients of the derivative `d/dy Σ c_n yⁿ`.
pub fn poly_derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(n, a)| a * n as f64).collect()
}

/// Design-polynomial value `f(x) = Σ c_n (x/γ)ⁿ`.
pub fn design_poly(target: &TargetCoefficients, gamma: Complex64, x: Complex64) -> Complex64 {
    poly_eval(target.coeffs(), x / gamma)
}

/// Newton refinement of a root of multiplicity `mult` via the simple root of
/// the `(mult−1)`-th derivative.
fn polish(c: &[Complex64], mut y: Complex64, mult: usize) -> Complex64 {
    let mut p = c.to_vec();
    for _ in 1..mult {
        p = poly_derivative(&p);
    }
    let dp = poly_derivative(&p);
    for _ in 0..8 {
        let d = poly_eval(&dp, y);
        if d.norm() == 0.0 {
            break;
        }
        let step = poly_eval(&p, y) / d;
        y -= step;
        if step.norm() <= 1e-17 * y.norm().max(1.0) {
            break;
        }
    }
    y
}

/// Solves `Σ c_n (x/γ)ⁿ = 0` via companion-matrix eigenvalues.
///
/// Roots closer than `1e-7·max|γ_j|` are merged with summed multiplicity; the
/// result is ordered by ascending argument, then ascending modulus.
pub fn solve_roots(target: &TargetCoefficients, gamma: Complex64) -> Result<EliminationRoots> {
    if gamma.norm() == 0.0 {
        return Err(SchemeError::InvalidParameter(
            "probe amplitude gamma must be nonzero".into(),
        ));
    }
    let c = target.coeffs();
    let k = target.k();
    let lead = c[k];
    if lead.norm() == 0.0 {
        return Err(SchemeError::DegenerateLeadingCoefficient);
    }
    // Companion matrix of the monic polynomial in y = x/γ.
    let companion = DMatrix::<Complex64>::from_fn(k, k, |r, col| {
        if col == k - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let ys: Vec<Complex64> = if k == 1 {
        vec![-c[0] / lead]
    } else {
        Schur::new(companion)
            .eigenvalues()
            .ok_or_else(|| SchemeError::InvalidTarget("companion eigenvalues unavailable".into()))?
            .iter()
            .copied()
            .collect()
    };
    let scale = ys.iter().map(|y| y.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let cmax_y = c.iter().map(|x| (x / lead).norm()).fold(0.0, f64::max);

    // Eigenvalues of an l-fold root scatter by ~ε^{1/l}, so plain radius
    // clustering only catches double roots. Clusters are therefore grown
    // greedily: first with the declared merge radius, then neighbouring clusters
    // within a wider candidate radius are fused whenever the fused point is a
    // genuine multiple root (all Taylor coefficients below its multiplicity vanish).
    let mut clusters: Vec<(Vec<Complex64>, Complex64)> = Vec::new();
    for y in ys {
        match clusters
            .iter_mut()
            .find(|(m, _)| m.iter().any(|z| (z - y).norm() <= MERGE_TOL_REL * scale))
        {
            Some(cl) => cl.0.push(y),
            None => clusters.push((vec![y], y)),
        }
    }
    for cl in clusters.iter_mut() {
        cl.1 = polish(c, centroid(&cl.0), cl.0.len());
    }
    loop {
        let mut fused = false;
        'search: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                if (clusters[i].1 - clusters[j].1).norm() > CANDIDATE_RADIUS_REL * scale {
                    continue;
                }
                let members: Vec<Complex64> = clusters[i].0.iter().chain(&clusters[j].0).copied().collect();
                let y = polish(c, centroid(&members), members.len());
                if is_multiple_root(c, lead, y, members.len(), 1e-10 * cmax_y) {
                    clusters[i] = (members, y);
                    clusters.remove(j);
                    fused = true;
                    break 'search;
                }
            }
        }
        if !fused {
            break;
        }
    }

    let mut roots: Vec<Root> = clusters
        .into_iter()
        .map(|(members, y)| Root {
            value: y * gamma,
            mult: members.len(),
        })
        .collect();
    // Ascending argument, then modulus; arguments equal to rounding count as ties.
    roots.sort_by(|a, b| a.value.arg().total_cmp(&b.value.arg()));
    let mut start = 0;
    while start < roots.len() {
        let a0 = roots[start].value.arg();
        let mut end = start + 1;
        while end < roots.len() && roots[end].value.arg() - a0 <= ARG_TIE_TOL {
            end += 1;
        }
        roots[start..end].sort_by(|a, b| a.value.norm().total_cmp(&b.value.norm()));
        start = end;
    }

    let cmax = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let bound = 1e-10 * cmax;
    let residual = roots
        .iter()
        .map(|r| design_poly(target, gamma, r.value).norm())
        .fold(0.0, f64::max);
    if residual > bound {
        return Err(SchemeError::RootResidual { residual, bound });
    }
    Ok(EliminationRoots { roots, gamma })
}
