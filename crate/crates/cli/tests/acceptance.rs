//! Acceptance suite: one PASS/FAIL line per criterion, with the measured values
//! and the wall-clock time against each budget.
//!
//! The process exits successfully even when a criterion fails, so that the
//! workspace test run reports the outcome without aborting; set
//! `KERRGEN_ACCEPTANCE_STRICT=1` to turn any failure into a non-zero exit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use entanglement::{entropy_of_coeffs, entropy_of_target, optimize_coefficients, GramPair};
use fock_core::{apply_beamsplitter, apply_cross_kerr, apply_phase, FockVector, TruncationSpec};
use noise_model::{
    epsilon_for_fidelity, feasibility_check, fidelity_leading_order, pipeline_fidelity, Detector, NoiseParams,
    ReachSetup,
};
use num_complex::Complex64;
use protocol_sim::{
    analytic_target_state, elimination_soundness, oracle_equivalence, pacs_annihilation_norm, residual_scaling,
    run_full_protocol, success_probability_ideal, OutcomeRecord, Preset, ProtocolParams, DEFAULT_N_CUT,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scheme_design::{poly_from_roots, solve_roots, ReferenceNetwork, TargetCoefficients};

type Check = Result<(bool, String), String>;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn all_click(records: &[OutcomeRecord]) -> &OutcomeRecord {
    records
        .iter()
        .find(|r| r.is_all_click())
        .expect("an all-click record exists")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs one criterion, timing it and turning panics and errors into failures.
fn criterion(id: usize, name: &str, budget_s: f64, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = match outcome {
        Ok(Ok((ok, detail))) => (ok, detail),
        Ok(Err(e)) => (false, format!("error: {e}")),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panic: {msg}"))
        }
    };
    let in_time = secs <= budget_s;
    let pass = ok && in_time;
    println!(
        "{} {id:>2}. {name}: {detail} [{secs:.2} s, budget {budget_s} s{}]",
        if pass { "PASS" } else { "FAIL" },
        if in_time { "" } else { ", over budget" }
    );
    pass
}

// ---------------------------------------------------------------- 1

fn bell_generation() -> Check {
    let params = Preset::BellK1.params_with(0.1, 1e-3).map_err(err)?;
    let records = run_full_protocol(&params).map_err(err)?;
    let rec = all_click(&records);
    let target =
        analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc).map_err(err)?;
    let f = rec.state.fidelity_pure(&target).map_err(err)?;
    let e = rec.entanglement().map_err(err)?;
    Ok((
        (e - 1.0).abs() <= 0.02 && f >= 0.99,
        format!("E = {e:.5} (1 ± 0.02), F = {f:.5} (≥ 0.99)"),
    ))
}

// ---------------------------------------------------------------- 2

fn qutrit_limits() -> Check {
    let a2: f64 = 1e4;
    let alpha = real(a2.sqrt());
    let mut out = Vec::new();
    let mut ok = true;
    for (x, expect, low) in [(1e-4, 1.5, true), (100.0, 3f64.log2(), false)] {
        let chi = (x / a2).sqrt();
        let t0 = Instant::now();
        let target = if low {
            TargetCoefficients::maxent_k2_low(a2, a2, chi)
        } else {
            TargetCoefficients::maxent_k2_high(a2, a2, chi)
        };
        let e = entropy_of_target(&target, alpha, alpha, chi).map_err(err)?.entropy;
        let dt = t0.elapsed().as_secs_f64();
        ok &= (e - expect).abs() <= 0.005 && dt <= 1.0;
        out.push(format!(
            "x = {x}: E = {e:.5} (target {expect:.5} ± 0.005, {dt:.3} s ≤ 1 s)"
        ));
    }
    Ok((ok, out.join("; ")))
}

// ---------------------------------------------------------------- 3

fn optimizer_recovery() -> Check {
    let a2: f64 = 10.0;
    let alpha = real(a2.sqrt());
    let mut ok = true;
    let mut out = Vec::new();
    for x in [0.01, 1.0, 100.0] {
        let chi = (x / a2).sqrt();
        let expect = TargetCoefficients::bell_k1(a2, a2, chi);
        let want = expect.coeffs()[1] / expect.coeffs()[0];
        let c = optimize_coefficients(1, alpha, alpha, chi)
            .map_err(err)?
            .c_opt
            .ok_or("no coefficients")?;
        let got = c[1] / c[0];
        let dm = (got.norm() - want.norm()).abs();
        let dp = (got / want).arg().abs();
        ok &= dm <= 1e-3 && dp <= 1e-2;
        out.push(format!("x = {x}: |Δmod| = {dm:.1e}, |Δphase| = {dp:.1e}"));
    }
    Ok((ok, out.join("; ") + " (limits 1e-3, 1e-2 rad)"))
}

// ---------------------------------------------------------------- 4

fn oracle_equivalence_check() -> Check {
    let mut ok = true;
    let mut out = Vec::new();
    for preset in [Preset::BellK1, Preset::QutritHigh] {
        let params = preset.params(0.1).map_err(err)?;
        let report = oracle_equivalence(&params, DEFAULT_N_CUT).map_err(err)?;
        let (exponent, _, _) = residual_scaling(&params, DEFAULT_N_CUT).map_err(err)?;
        ok &= report.trace_distance <= 1e-5 && (1.7..=2.3).contains(&exponent);
        out.push(format!(
            "{}: D = {:.2e} (≤ 1e-5), exponent {exponent:.3} ([1.7, 2.3])",
            preset.name(),
            report.trace_distance
        ));
    }
    Ok((ok, out.join("; ")))
}

// ---------------------------------------------------------------- 5

fn elimination_soundness_check() -> Check {
    let mut worst_click: f64 = 0.0;
    for preset in Preset::ALL {
        let params = preset.params(0.1).map_err(err)?;
        for p in elimination_soundness(&params.scheme).map_err(err)? {
            worst_click = worst_click.max(p);
        }
    }
    let mut worst_pacs: f64 = 0.0;
    for g in [Complex64::new(0.15, -0.1), Complex64::new(-0.3, 0.2)] {
        for l in 1..=3 {
            for s in 0..l {
                worst_pacs = worst_pacs.max(pacs_annihilation_norm(g, s, l).map_err(err)?);
            }
        }
    }
    Ok((
        worst_click <= 1e-10 && worst_pacs <= 1e-10,
        format!("max own-root click probability {worst_click:.1e}, max annihilation norm {worst_pacs:.1e} (≤ 1e-10)"),
    ))
}

// ---------------------------------------------------------------- 6

/// `(|02⟩ + √2|11⟩ + |20⟩)/(2√2)`, normalized.
fn photon_pair_state(trunc: TruncationSpec) -> Result<FockVector, String> {
    let d = trunc.dim();
    let mut amps = vec![real(0.0); d * d];
    amps[2] = real(0.5);
    amps[d + 1] = real(0.5 * 2f64.sqrt());
    amps[2 * d] = real(0.5);
    FockVector::new(&["a", "b"], amps, trunc).map_err(err)
}

fn photon_correlated_target() -> Check {
    let target = Preset::PhotonK2.target();
    let mut fids = Vec::new();
    let amps = [0.2, 0.1, 0.05];
    for alpha in amps {
        let a = real(alpha);
        let params =
            ProtocolParams::new(a, a, real(0.1), 1.0, target.clone(), scheme_design::DEFAULT_DELTA).map_err(err)?;
        let records = run_full_protocol(&params).map_err(err)?;
        fids.push(
            all_click(&records)
                .state
                .fidelity_pure(&photon_pair_state(params.trunc)?)
                .map_err(err)?,
        );
    }
    let monotone = fids.windows(2).all(|w| w[1] > w[0]);
    // Convergence order from the last halving of |α|.
    let order = ((1.0 - fids[1]) / (1.0 - fids[2])).log2();
    let ok = fids[1] >= 0.95 && monotone && order >= 1.0;
    Ok((
        ok,
        format!(
            "F(|α| = 0.2, 0.1, 0.05) = {:.4}, {:.4}, {:.4} (≥ 0.95 at 0.1, increasing), 1 − F order {order:.2} (≥ 1)",
            fids[0], fids[1], fids[2]
        ),
    ))
}

// ---------------------------------------------------------------- 7

fn success_probability_check() -> Check {
    let mut ok = true;
    let mut worst = Vec::new();
    for preset in [Preset::BellK1, Preset::QutritHigh] {
        let mut line = Vec::new();
        for g2 in [0.0025f64, 0.01, 0.04] {
            let params = preset.params(g2.sqrt()).map_err(err)?;
            let p = all_click(&run_full_protocol(&params).map_err(err)?).probability;
            let ideal = success_probability_ideal(
                &params.target,
                params.gamma,
                params.scheme.q,
                params.alpha,
                params.beta,
                params.chi,
            );
            let rel = (p / ideal - 1.0).abs();
            ok &= rel <= 3.0 * g2;
            line.push(format!("{:.2}|γ|²", rel / g2));
        }
        worst.push(format!("{}: rel. error = {}", preset.name(), line.join(", ")));
    }
    Ok((ok, worst.join("; ") + " (limit 3|γ|²)"))
}

// ---------------------------------------------------------------- 8

fn noise_consistency() -> Check {
    let noise = NoiseParams {
        lambda_kerr: 1e-3,
        lambda_storage: 1e-3,
        dphi2: 1e-5,
        eps_ac: 0.01,
        eps_bc: 0.01,
        zeta: 0.0,
        ..NoiseParams::ideal()
    };
    let a2: f64 = 10.0;
    let alpha = real(a2.sqrt());
    let gamma = real(0.1);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for x in [0.01, 0.1, 1.0] {
        let chi = (x / a2).sqrt();
        for target in [
            TargetCoefficients::bell_k1(a2, a2, chi),
            TargetCoefficients::maxent_k2_low(a2, a2, chi),
        ] {
            let lead = fidelity_leading_order(&target, &noise, alpha, alpha, gamma, chi)
                .map_err(err)?
                .total_infidelity();
            let exact = 1.0 - pipeline_fidelity(&target, &noise, alpha, alpha, gamma, chi).map_err(err)?;
            let rel = (lead - exact).abs() / exact;
            worst = worst.max(rel);
            ok &= rel <= 0.1;
            cases += 1;
        }
    }
    Ok((
        ok,
        format!(
            "max |Δ(1 − F)|/(1 − F) = {:.1}% over {cases} cases (K = 1, 2; x = 0.01, 0.1, 1) (≤ 10%)",
            100.0 * worst
        ),
    ))
}

// ---------------------------------------------------------------- 9

fn feasibility_reproduction() -> Check {
    let a2: f64 = 10.0;
    let eps = epsilon_for_fidelity(0.9);
    let det = Detector::LOW_NOISE;
    let noise = NoiseParams {
        lambda_det: det.lambda_det,
        zeta: det.zeta,
        ..NoiseParams::ideal()
    };
    let report = feasibility_check(&noise, real(a2.sqrt()), 0.01, real(0.1), eps, 1).map_err(err)?;
    let max_db = report.max_attenuation_db;
    // Success probability evaluated at the fidelity ceiling on |γ|², without any further cap.
    let setup = ReachSetup {
        k: 2,
        alpha_sq: a2,
        chi: 0.01,
        detector: det,
        eps,
        gamma_sq_cap: f64::INFINITY,
    };
    let cutoff = setup.practical_cutoff_db(1e-6).map_err(err)?;
    let cutoff_ok = cutoff.is_some_and(|c| (c - 14.0).abs() <= 2.0);
    Ok((
        (20.0..=28.0).contains(&max_db) && cutoff_ok,
        format!(
            "max attenuation {max_db:.2} dB ([20, 28]), K = 2 cutoff (p ≥ 1e-6) {} (14 ± 2 dB)",
            cutoff.map_or("none".to_string(), |c| format!("{c:.2} dB"))
        ),
    ))
}

// ---------------------------------------------------------------- 10

const PROPERTY_SEED: u64 = 0xacce_9770;
const INSTANCES: usize = 100;

fn complex_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(
        rng.random_range(lo..hi),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn separated_roots(rng: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    loop {
        let ys: Vec<Complex64> = (0..k).map(|_| complex_in(rng, lo, hi)).collect();
        if ys
            .iter()
            .enumerate()
            .all(|(i, a)| ys[i + 1..].iter().all(|b| (a - b).norm() > 0.1))
        {
            return ys;
        }
    }
}

fn random_two_mode(rng: &mut ChaCha8Rng, trunc: TruncationSpec) -> Result<FockVector, String> {
    let d = trunc.dim();
    let mut amps = vec![real(0.0); d * d];
    for i in 0..6 {
        for j in 0..6 {
            amps[i * d + j] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    Ok(FockVector::new(&["c", "d"], amps, trunc).map_err(err)?.normalized())
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let mut failures: Vec<String> = Vec::new();
    let mut note = |name: &str, bad: usize| {
        if bad > 0 {
            failures.push(format!("{name}: {bad}/{INSTANCES}"));
        }
    };

    // Unitarity of the gates (norm preservation; the cutoff leaves room for the moved photons).
    let trunc = TruncationSpec::new(12, 1e-12).map_err(err)?;
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let psi = random_two_mode(&mut rng, trunc)?;
        let theta = rng.random_range(-3.2..3.2);
        let outs = [
            apply_beamsplitter(&psi, "c", "d", theta).map_err(err)?,
            apply_cross_kerr(&psi, "c", "d", theta).map_err(err)?,
            apply_phase(&psi, "d", theta).map_err(err)?,
        ];
        bad += usize::from(outs.iter().any(|o| (o.norm_sqr() - 1.0).abs() > 1e-12));
    }
    note("unitarity", bad);

    // Completeness of the outcome probabilities.
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let k = rng.random_range(1..=2);
        let target = TargetCoefficients::new(poly_from_roots(&separated_roots(&mut rng, k, 0.3, 1.5))).map_err(err)?;
        let params = ProtocolParams::new(
            complex_in(&mut rng, 0.1, 1.5),
            complex_in(&mut rng, 0.1, 1.5),
            complex_in(&mut rng, 0.05, 0.25),
            rng.random_range(0.1..std::f64::consts::PI),
            target,
            rng.random_range(0.05..0.3),
        )
        .map_err(err)?;
        let total: f64 = run_full_protocol(&params)
            .map_err(err)?
            .iter()
            .map(|r| r.probability)
            .sum();
        bad += usize::from((total - 1.0).abs() > 1e-10);
    }
    note("completeness", bad);

    // Gauge invariance of the entanglement entropy.
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let k = rng.random_range(1..=4);
        let c: Vec<Complex64> = (0..=k).map(|_| complex_in(&mut rng, 0.1, 2.0)).collect();
        let (a, b) = (complex_in(&mut rng, 0.3, 3.0), complex_in(&mut rng, 0.3, 3.0));
        let gram = GramPair::new(a, b, rng.random_range(0.05..3.0), k);
        let scale = complex_in(&mut rng, 0.01, 100.0);
        let scaled: Vec<Complex64> = c.iter().map(|x| x * scale).collect();
        let e1 = entropy_of_coeffs(&gram, &c).map_err(err)?.entropy;
        let e2 = entropy_of_coeffs(&gram, &scaled).map_err(err)?.entropy;
        bad += usize::from((e1 - e2).abs() > 1e-10);
    }
    note("gauge invariance", bad);

    // Root round trip: coefficients → roots → coefficients.
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let k = rng.random_range(1..=6);
        let scale = complex_in(&mut rng, 0.1, 3.0);
        let coeffs: Vec<Complex64> = poly_from_roots(&separated_roots(&mut rng, k, 0.3, 1.5))
            .iter()
            .map(|x| x * scale)
            .collect();
        let gamma = complex_in(&mut rng, 0.05, 1.0);
        let roots = solve_roots(&TargetCoefficients::new(coeffs.clone()).map_err(err)?, gamma).map_err(err)?;
        let lead = coeffs[k];
        let cmax = coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let back = roots.monic_coefficients();
        bad += usize::from(
            roots.k() != k
                || back
                    .iter()
                    .zip(&coeffs)
                    .any(|(m, c)| (m * lead - c).norm() > 1e-8 * cmax),
        );
    }
    note("root round trip", bad);

    // Reference network reproduces the requested amplitudes.
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let k = rng.random_range(1..=6);
        let g: Vec<Complex64> = (0..k).map(|_| complex_in(&mut rng, 0.0, 5.0)).collect();
        let net = ReferenceNetwork::solve(&g).map_err(err)?;
        let energy: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        bad += usize::from(net.residual(&g) > 1e-8 * energy.sqrt().max(1e-300));
    }
    note("reference network", bad);

    let detail = if failures.is_empty() {
        format!("5 properties × {INSTANCES} instances (seed {PROPERTY_SEED:#x}) hold")
    } else {
        format!("violations — {}", failures.join(", "))
    };
    Ok((failures.is_empty(), detail))
}

fn main() {
    let results = [
        criterion(1, "Bell-state generation (K=1)", 10.0, bell_generation),
        criterion(2, "Qutrit limits (K=2)", 2.0, qutrit_limits),
        criterion(3, "Optimizer recovery (K=1)", 60.0, optimizer_recovery),
        criterion(4, "Oracle equivalence", 60.0, oracle_equivalence_check),
        criterion(5, "Elimination soundness", 5.0, elimination_soundness_check),
        criterion(6, "Photon-correlated target", 10.0, photon_correlated_target),
        criterion(7, "Success probability", 30.0, success_probability_check),
        criterion(8, "Noise pipeline consistency", 60.0, noise_consistency),
        criterion(9, "Feasibility reproduction", 60.0, feasibility_reproduction),
        criterion(10, "Property suites", 120.0, property_suites),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed < results.len() && std::env::var("KERRGEN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
