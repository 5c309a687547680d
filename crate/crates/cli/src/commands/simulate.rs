//! `kerrgen simulate`: full network simulation with per-pattern diagnostics.

use fock_core::TruncationSpec;
use noise_model::{fidelity_leading_order, pipeline_fidelity, NoiseParams};
use protocol_sim::{
    analytic_target_state, oracle_equivalence, run_full_protocol, semi_success_state, success_probability_ideal,
    OutcomeRecord, ProtocolParams, MAIN_TAIL_TOL,
};
use scheme_design::{design_scheme, DetectionScheme};

use crate::args::{NoiseArgs, SimulateArgs};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, Artifact, Cell};
use crate::target::{resolve, ResolvedTarget};

/// Largest photon-number cutoff of the main modes that is simulated densely.
pub const MAX_MAIN_CUTOFF: usize = 160;

pub const COLUMNS: [&str; 6] = [
    "pattern",
    "clicks",
    "probability",
    "fidelity_vs_target",
    "entanglement",
    "oracle_residual",
];

impl NoiseArgs {
    /// Noise parameters; detector efficiency and dark counts default to ideal.
    pub fn params(&self) -> NoiseParams {
        NoiseParams {
            lambda_channel: self.lambda_channel,
            lambda_kerr: self.lambda_kerr,
            lambda_storage: self.lambda_storage,
            dphi2: self.dphi2,
            lambda_det: self.lambda_det.unwrap_or(1.0),
            zeta: self.zeta.unwrap_or(0.0),
            eps_ac: self.eps_ac,
            eps_bc: self.eps_bc,
        }
    }
}

pub fn echo_noise(art: &mut Artifact, n: &NoiseParams) {
    art.param("Lambda", fmt_f64(n.lambda_channel));
    art.param("Lambda1", fmt_f64(n.lambda_kerr));
    art.param("Lambda2", fmt_f64(n.lambda_storage));
    art.param("dphi2", fmt_f64(n.dphi2));
    art.param("lambda_det", fmt_f64(n.lambda_det));
    art.param("zeta", fmt_f64(n.zeta));
    art.param("eps_ac", fmt_f64(n.eps_ac));
    art.param("eps_bc", fmt_f64(n.eps_bc));
}

fn protocol_params(t: &ResolvedTarget, scheme: Option<DetectionScheme>) -> Result<ProtocolParams> {
    let scheme = match scheme {
        Some(s) => s,
        None => design_scheme(&t.target, t.gamma, t.delta)?,
    };
    let amp = t.alpha.norm().max(t.beta.norm()).max(scheme.gamma().norm());
    let trunc = TruncationSpec::for_amplitude(amp, MAIN_TAIL_TOL)?;
    if trunc.n_max() > MAX_MAIN_CUTOFF {
        return Err(CliError::Truncation(format!(
            "amplitude {amp:.3} needs a cutoff of {} photons per mode (limit {MAX_MAIN_CUTOFF})",
            trunc.n_max()
        )));
    }
    let gamma = scheme.gamma();
    Ok(ProtocolParams::with_scheme(
        t.alpha,
        t.beta,
        gamma,
        t.chi,
        t.target.clone(),
        scheme,
        trunc,
    )?)
}

/// Detectors (1-based) that stayed silent.
fn missing(rec: &OutcomeRecord) -> Vec<usize> {
    rec.pattern
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(j, _)| j + 1)
        .collect()
}

/// Runs the protocol and builds the outcome table.
pub fn simulate(
    t: &ResolvedTarget,
    scheme: Option<DetectionScheme>,
    n_cut: usize,
    noise: &NoiseParams,
) -> Result<Artifact> {
    noise.validate()?;
    let params = protocol_params(t, scheme)?;
    let records = run_full_protocol(&params)?;
    let oracle = oracle_equivalence(&params, n_cut)?;
    let mut art = Artifact::new("simulate", COLUMNS.to_vec());
    t.echo(&mut art);
    art.param("n_cut", n_cut);
    echo_noise(&mut art, noise);
    art.note("q", fmt_f64(params.scheme.q));
    art.note(
        "total_probability",
        fmt_f64(records.iter().map(|r| r.probability).sum()),
    );
    let ideal = success_probability_ideal(
        &params.target,
        params.gamma,
        params.scheme.q,
        params.alpha,
        params.beta,
        params.chi,
    );
    art.note("success_probability_leading_order", fmt_f64(ideal));
    art.note("oracle_trace_distance", fmt_f64(oracle.trace_distance));
    if *noise != NoiseParams::ideal() {
        let b = fidelity_leading_order(
            &params.target,
            noise,
            params.alpha,
            params.beta,
            params.gamma,
            params.chi,
        )?;
        let names = [
            "t_dephase",
            "t_kerr_loss",
            "t_storage",
            "t_chi_err",
            "t_darkcount",
            "t_discrete_phase",
        ];
        for (name, v) in names.iter().zip(b.terms()) {
            art.note(name, fmt_f64(v));
        }
        art.note("noisy_fidelity_leading_order", fmt_f64(b.fidelity));
        let exact = pipeline_fidelity(
            &params.target,
            noise,
            params.alpha,
            params.beta,
            params.gamma,
            params.chi,
        )?;
        art.note("noisy_fidelity_pipeline", fmt_f64(exact));
    }
    for rec in &records {
        let silent = missing(rec);
        let (fid, ent) = if rec.probability > 0.0 {
            let expected = if silent.is_empty() {
                analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc)?
            } else {
                semi_success_state(
                    &params.scheme.roots,
                    &silent,
                    params.alpha,
                    params.beta,
                    params.chi,
                    params.trunc,
                )?
            };
            (
                Cell::Num(rec.state.fidelity_pure(&expected)?),
                Cell::Num(rec.entanglement()?),
            )
        } else {
            (Cell::Empty, Cell::Empty)
        };
        let residual = if rec.is_all_click() {
            Cell::Num(oracle.trace_distance)
        } else {
            Cell::Empty
        };
        art.push(vec![
            rec.pattern_label().into(),
            (params.k() - silent.len()).into(),
            rec.probability.into(),
            fid,
            ent,
            residual,
        ]);
    }
    Ok(art)
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let mut t = resolve(&args.target)?;
    let scheme = match &args.scheme {
        Some(path) => {
            let s = DetectionScheme::from_json(&std::fs::read_to_string(path)?)?;
            if s.k() != t.k() {
                return Err(CliError::Config(format!(
                    "scheme has {} detectors but the target needs {}",
                    s.k(),
                    t.k()
                )));
            }
            t.gamma = s.gamma();
            t.delta = s.delta;
            Some(s)
        }
        None => None,
    };
    let art = simulate(&t, scheme, args.n_cut, &args.noise.params())?;
    art.write(args.output.format, args.output.out.as_deref())
}
