//! `kerrgen feasibility`: loss budget and one-run success probability.

use noise_model::{
    epsilon_for_fidelity, feasibility_check, loss_from_db, success_vs_fidelity, Detector, NoiseParams, ReachSetup,
};
use num_complex::Complex64;

use crate::args::{DetectorPreset, FeasibilityArgs};
use crate::commands::simulate::echo_noise;
use crate::error::{CliError, Result};
use crate::output::{fmt_complex, fmt_f64, Artifact, Cell};

pub const COLUMNS: [&str; 6] = [
    "sweep",
    "attenuation_db",
    "lambda_channel",
    "fidelity",
    "gamma_sq",
    "probability",
];

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_db_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Config(format!("--db-grid expects start:stop:step, got `{spec}`"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start >= 0.0 && stop >= start && step > 0.0 && stop.is_finite()) {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn detector(args: &FeasibilityArgs) -> Detector {
    let preset = match args.detector {
        DetectorPreset::LowNoise => Detector::LOW_NOISE,
        DetectorPreset::HighEfficiency => Detector::HIGH_EFFICIENCY,
    };
    Detector {
        lambda_det: args.noise.lambda_det.unwrap_or(preset.lambda_det),
        zeta: args.noise.zeta.unwrap_or(preset.zeta),
    }
}

pub fn feasibility(args: &FeasibilityArgs) -> Result<Artifact> {
    if !(args.alpha > 0.0 && args.alpha.is_finite()) {
        return Err(CliError::Config("alpha must be positive".into()));
    }
    let eps = match args.epsilon {
        Some(e) => e,
        None if args.fidelity > 0.0 && args.fidelity < 1.0 => epsilon_for_fidelity(args.fidelity),
        None => {
            return Err(CliError::Config(format!(
                "fidelity must lie in (0, 1), got {}",
                args.fidelity
            )))
        }
    };
    let det = detector(args);
    let noise = NoiseParams {
        lambda_det: det.lambda_det,
        zeta: det.zeta,
        ..args.noise.params()
    };
    let alpha = Complex64::new(args.alpha, 0.0);
    let report = feasibility_check(&noise, alpha, args.chi, args.gamma, eps, args.k)?;
    let setup = ReachSetup {
        k: args.k,
        alpha_sq: args.alpha * args.alpha,
        chi: args.chi,
        detector: det,
        eps,
        gamma_sq_cap: args.gamma_sq_cap,
    };
    let grid = parse_db_grid(&args.db_grid)?;
    if args.fidelity_grid.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
        return Err(CliError::Config("fidelity grid values must lie in (0, 1)".into()));
    }

    let mut art = Artifact::new("feasibility", COLUMNS.to_vec());
    art.param("K", args.k);
    art.param("alpha", fmt_f64(args.alpha));
    art.param("chi", fmt_f64(args.chi));
    art.param(
        "distinguishability",
        fmt_f64(args.alpha * args.alpha * args.chi * args.chi),
    );
    art.param("gamma", fmt_complex(args.gamma));
    art.param("epsilon", fmt_f64(eps));
    art.param("fidelity_target", fmt_f64(1.0 - 6.0 * eps));
    art.param("gamma_sq_cap", fmt_f64(args.gamma_sq_cap));
    art.param("p_min", fmt_f64(args.p_min));
    art.param("loss_db", fmt_f64(args.loss_db));
    art.param("seed", args.seed);
    echo_noise(&mut art, &noise);

    art.note("lambda_max", fmt_f64(report.lambda_max));
    art.note("dark_count_cutoff_db", fmt_f64(report.max_attenuation_db));
    art.note("max_distance_km", fmt_f64(report.max_distance_km));
    let cutoff = if det.zeta > 0.0 {
        setup.practical_cutoff_db(args.p_min)?
    } else {
        None
    };
    art.note("practical_cutoff_db", cutoff.map_or("none".to_string(), fmt_f64));
    for c in &report.conditions {
        art.note(
            &format!("condition_{}", c.name.replace(' ', "_")),
            format!(
                "value={} bound={} margin={} pass={}",
                fmt_f64(c.value),
                fmt_f64(c.bound),
                fmt_f64(c.margin),
                c.pass
            ),
        );
    }
    art.note("all_conditions_pass", report.all_pass());

    let f_target = 1.0 - 6.0 * eps;
    for p in setup.sweep_db(&grid)? {
        art.push(vec![
            "loss".into(),
            p.attenuation_db.into(),
            p.lambda_channel.into(),
            f_target.into(),
            p.gamma_sq.into(),
            p.probability.into(),
        ]);
    }
    for (f, p) in success_vs_fidelity(&setup, loss_from_db(args.loss_db), &args.fidelity_grid)? {
        art.push(vec![
            "fidelity".into(),
            p.attenuation_db.into(),
            p.lambda_channel.into(),
            Cell::Num(f),
            p.gamma_sq.into(),
            p.probability.into(),
        ]);
    }
    Ok(art)
}

pub fn run(args: &FeasibilityArgs) -> Result<()> {
    feasibility(args)?.write(args.output.format, args.output.out.as_deref())
}
