//! Entanglement versus distinguishability: optimal and semi-successful outcomes.

use num_complex::Complex64;
use scheme_design::{design_scheme, TargetCoefficients, DEFAULT_DELTA};

use crate::entropy::semi_success_entropy;
use crate::error::Result;
use crate::optimize::{optimize_coefficients_with, OptimizerConfig};

/// One data point: distinguishability `|α|²χ²`, detector count, click pattern
/// (`1` = click, detector 1 first) and entropy in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub distinguishability: f64,
    pub k: usize,
    pub pattern: String,
    pub entropy: f64,
}

/// For every `x = |α|²χ²` and `K`, the optimal all-click entropy and the entropy
/// of every other click pattern with at least one click, at `|α|² = |β|² = alpha_sq`.
pub fn entanglement_scan(ks: &[usize], xs: &[f64], alpha_sq: f64, cfg: &OptimizerConfig) -> Result<Vec<ScanRow>> {
    let alpha = Complex64::new(alpha_sq.sqrt(), 0.0);
    let mut rows = Vec::new();
    for &x in xs {
        let chi = (x / alpha_sq).sqrt();
        for &k in ks {
            let best = optimize_coefficients_with(k, alpha, alpha, chi, cfg)?;
            let c = best.c_opt.clone().expect("optimizer reports coefficients");
            rows.push(ScanRow {
                distinguishability: x,
                k,
                pattern: "1".repeat(k),
                entropy: best.entropy,
            });
            // The probe amplitude only scales the roots; any value gives the same states.
            let scheme = design_scheme(&TargetCoefficients::new(c)?, Complex64::new(0.1, 0.0), DEFAULT_DELTA)?;
            for mask in 1..(1usize << k) - 1 {
                let missing: Vec<usize> = (0..k).filter(|j| mask & (1 << j) == 0).map(|j| j + 1).collect();
                let pattern: String = (0..k).map(|j| if mask & (1 << j) != 0 { '1' } else { '0' }).collect();
                let e = semi_success_entropy(&scheme.roots, &missing, alpha, alpha, chi)?;
                rows.push(ScanRow {
                    distinguishability: x,
                    k,
                    pattern,
                    entropy: e.entropy,
                });
            }
        }
    }
    Ok(rows)
}
