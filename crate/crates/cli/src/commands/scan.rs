//! `kerrgen entangle-scan`: entanglement versus distinguishability.

use entanglement::{entanglement_scan, EntanglementError, OptimizerConfig, ScanRow};
use rayon::prelude::*;

use crate::args::ScanArgs;
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, Artifact, Cell};

pub const COLUMNS: [&str; 6] = ["x", "K", "pattern", "pattern_class", "entropy", "converged"];

/// `optimal` for the all-click outcome, `missing-m` when `m` detectors stayed silent.
fn pattern_class(pattern: &str) -> String {
    let silent = pattern.chars().filter(|&c| c == '0').count();
    if silent == 0 {
        "optimal".into()
    } else {
        format!("missing-{silent}")
    }
}

/// Scans every `(x, K)` grid point in parallel; rows come out in grid order.
/// Returns the table and the number of points whose optimizer did not converge.
pub fn scan(xs: &[f64], ks: &[usize], alpha: f64, cfg: &OptimizerConfig) -> Result<(Artifact, usize)> {
    if xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(CliError::Config("distinguishability values must be positive".into()));
    }
    if ks.contains(&0) {
        return Err(CliError::Config("K must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::Config("alpha must be positive".into()));
    }
    let alpha_sq = alpha * alpha;
    let grid: Vec<(f64, usize)> = xs.iter().flat_map(|&x| ks.iter().map(move |&k| (x, k))).collect();
    let points: Vec<Result<(Vec<ScanRow>, bool)>> = grid
        .par_iter()
        .map(|&(x, k)| match entanglement_scan(&[k], &[x], alpha_sq, cfg) {
            Ok(rows) => Ok((rows, true)),
            Err(EntanglementError::NonConvergence { best }) => Ok((
                vec![ScanRow {
                    distinguishability: x,
                    k,
                    pattern: "1".repeat(k),
                    entropy: best.entropy,
                }],
                false,
            )),
            Err(e) => Err(e.into()),
        })
        .collect();
    let mut art = Artifact::new("entangle-scan", COLUMNS.to_vec());
    art.param("alpha", fmt_f64(alpha));
    art.param("x_grid", xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" "));
    art.param("ks", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" "));
    art.param("seed", cfg.seed);
    art.param("restarts", cfg.restarts);
    let mut failed = 0;
    for point in points {
        let (rows, converged) = point?;
        failed += usize::from(!converged);
        for r in rows {
            art.push(vec![
                r.distinguishability.into(),
                r.k.into(),
                r.pattern.clone().into(),
                pattern_class(&r.pattern).into(),
                r.entropy.into(),
                Cell::Bool(converged),
            ]);
        }
    }
    art.note("nonconverged_points", failed);
    Ok((art, failed))
}

pub fn run(args: &ScanArgs) -> Result<()> {
    let cfg = OptimizerConfig {
        seed: args.seed,
        restarts: args.restarts,
        ..OptimizerConfig::default()
    };
    if cfg.restarts == 0 {
        return Err(CliError::Config("at least one optimizer restart is needed".into()));
    }
    let (art, failed) = scan(&args.x_grid, &args.ks, args.alpha, &cfg)?;
    art.write(args.output.format, args.output.out.as_deref())?;
    if failed > 0 {
        return Err(CliError::NonConvergence(format!(
            "{failed} grid point(s) flagged in the output"
        )));
    }
    Ok(())
}
