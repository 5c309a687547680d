//! Reference values and cross-checks for the protocol simulation.

use fock_core::{apply_phase, inner, FockVector, TruncationSpec};
use num_complex::Complex64;
use protocol_sim::*;
use scheme_design::{design_scheme, TargetCoefficients};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn all_click(records: &[OutcomeRecord]) -> &OutcomeRecord {
    records.iter().find(|r| r.is_all_click()).unwrap()
}

/// `|⟨a|b⟩|²/(‖a‖²‖b‖²)`.
fn pure_fidelity(a: &FockVector, b: &FockVector) -> f64 {
    inner(a, b).unwrap().norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

/// `(|02⟩ + √2|11⟩ + |20⟩)/2`.
fn photon_pair_state(trunc: TruncationSpec) -> FockVector {
    let d = trunc.dim();
    let mut amps = vec![c(0.0, 0.0); d * d];
    amps[2] = c(0.5, 0.0);
    amps[d + 1] = c(0.5 * 2f64.sqrt(), 0.0);
    amps[2 * d] = c(0.5, 0.0);
    FockVector::new(&["a", "b"], amps, trunc).unwrap()
}

// ---------------------------------------------------------------- analytic states

#[test]
fn trivial_target_is_a_product_state() {
    // c = (1, 0) is not a valid design target (vanishing leading coefficient),
    // but the superposition itself reduces to |α⟩|β⟩.
    assert!(TargetCoefficients::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    let trunc = TruncationSpec::for_amplitude(2.0, 1e-14).unwrap();
    let (a, b) = (c(1.2, 0.3), c(-0.4, 0.9));
    let psi = coherent_pair_superposition(&[c(1.0, 0.0), c(0.0, 0.0)], a, b, 0.3, trunc).unwrap();
    let product = FockVector::coherent_product(&["a", "b"], &[a, b], trunc).unwrap();
    assert!(pure_fidelity(&psi, &product) > 1.0 - 1e-14);
}

#[test]
fn photon_correlated_target_at_small_amplitude() {
    // Σ c_n |αe^{iχn}⟩|αe^{iχn}⟩ → |02⟩ + √2|11⟩ + |20⟩ as α → 0.
    let target = Preset::PhotonK2.target();
    let trunc = TruncationSpec::new(8, 1e-12).unwrap();
    let ideal = photon_pair_state(trunc);
    let mut last = 0.0;
    for alpha in [0.2, 0.1, 0.05, 0.025] {
        let psi = analytic_target_state(&target, c(alpha, 0.0), c(alpha, 0.0), 1.0, trunc).unwrap();
        let f = pure_fidelity(&psi, &ideal);
        assert!(f > last);
        assert!(1.0 - f < 4.0 * alpha * alpha, "alpha {alpha}: 1-F = {}", 1.0 - f);
        last = f;
    }
}

#[test]
fn target_norm_matches_fock_norm() {
    let trunc = TruncationSpec::for_amplitude(3.5, 1e-15).unwrap();
    for preset in Preset::ALL {
        let t = preset.target();
        let (a2, chi) = preset.intensity_and_chi();
        let a = c(a2.sqrt(), 0.0);
        if a2 > 12.0 {
            continue;
        }
        let psi = coherent_pair_superposition(t.coeffs(), a, a, chi, trunc).unwrap();
        let exact = target_norm_sqr(t.coeffs(), a, a, chi);
        assert!(
            (psi.norm_sqr() - exact).abs() < 1e-12 * exact.max(1.0),
            "{}",
            preset.name()
        );
    }
}

#[test]
fn ideal_success_probability_limits() {
    let target = Preset::QutritHigh.target();
    assert_eq!(
        success_probability_ideal(&target, c(0.0, 0.0), 0.7, c(5.0, 0.0), c(5.0, 0.0), 2.0),
        0.0
    );
    // K = 2 with q = 1/√2: p = (|γ|²/K)^K / |c₂|² = |γ|⁴ / (4|c₂|²), normalized convention.
    let (a, chi, g) = (c(5.0, 0.0), 2.0, 0.1);
    let q = 0.5f64.sqrt();
    let p = success_probability_ideal(&target, c(g, 0.0), q, a, a, chi);
    let c2 = target.coeffs()[2].norm_sqr() / target_norm_sqr(target.coeffs(), a, a, chi);
    assert!((p / (g.powi(4) / (4.0 * c2)) - 1.0).abs() < 1e-12);
}

// ---------------------------------------------------------------- full simulation

#[test]
fn outcome_probabilities_are_complete() {
    for preset in [Preset::BellK1, Preset::QutritHigh, Preset::PhotonK2] {
        let params = preset.params(0.1).unwrap();
        let records = run_full_protocol(&params).unwrap();
        assert_eq!(records.len(), 1 << params.k());
        let total: f64 = records.iter().map(|r| r.probability).sum();
        assert!((total - 1.0).abs() < 1e-10, "{}: {total}", preset.name());
        for r in &records {
            assert!((0.0..=1.0).contains(&r.probability));
            if r.probability > 0.0 {
                assert!((r.state.trace() - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn bell_state_generation() {
    let params = Preset::BellK1.params(0.1).unwrap();
    let records = run_full_protocol(&params).unwrap();
    let rec = all_click(&records);
    assert_eq!(rec.pattern_label(), "1");
    let target = analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc).unwrap();
    let f = rec.state.fidelity_pure(&target).unwrap();
    assert!(f >= 0.99, "fidelity {f}");
    let e = rec.entanglement().unwrap();
    assert!((e - 1.0).abs() <= 0.02, "entanglement {e}");
    // The discarded failure outcome leaves the product state |α⟩|β⟩ rotated by the probe vacuum.
    let fail = records.iter().find(|r| !r.is_all_click()).unwrap();
    assert!(fail.entanglement().unwrap() < 0.05);
}

#[test]
fn all_click_fidelity_converges_quadratically() {
    let infid = |g: f64| {
        let params = Preset::BellK1.params(g).unwrap();
        let records = run_full_protocol(&params).unwrap();
        let target =
            analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc).unwrap();
        1.0 - all_click(&records).state.fidelity_pure(&target).unwrap()
    };
    let (big, small) = (infid(0.1), infid(0.05));
    assert!(small < big);
    let exponent = (big / small).log2();
    assert!((1.5..=2.5).contains(&exponent), "exponent {exponent}");
}

#[test]
fn semi_success_patterns_match_reduced_targets() {
    // Photon-number target: a silent detector removes its root from the product.
    let params = Preset::PhotonK2.params(0.05).unwrap();
    let records = run_full_protocol(&params).unwrap();
    for (label, missing) in [("01", 1usize), ("10", 2usize)] {
        let rec = records.iter().find(|r| r.pattern_label() == label).unwrap();
        let expected = semi_success_state(
            &params.scheme.roots,
            &[missing],
            params.alpha,
            params.beta,
            params.chi,
            params.trunc,
        )
        .unwrap();
        let f = rec.state.fidelity_pure(&expected).unwrap();
        assert!(f > 1.0 - 5.0 * params.gamma.norm_sqr(), "pattern {label}: fidelity {f}");
    }
}

#[test]
fn success_probability_matches_leading_order() {
    for preset in [Preset::BellK1, Preset::QutritHigh] {
        for g2 in [0.0025f64, 0.01] {
            let params = preset.params(g2.sqrt()).unwrap();
            let rec_p = all_click(&run_full_protocol(&params).unwrap()).probability;
            let s = &params.scheme;
            let ideal =
                success_probability_ideal(&params.target, params.gamma, s.q, params.alpha, params.beta, params.chi);
            let rel = (rec_p / ideal - 1.0).abs();
            assert!(rel <= 3.0 * g2, "{} |γ|²={g2}: relative error {rel}", preset.name());
        }
    }
}

#[test]
fn photon_target_fidelity_improves_as_amplitude_decreases() {
    let target = Preset::PhotonK2.target();
    let mut last = 0.0;
    for alpha in [0.2, 0.1, 0.05] {
        let a = c(alpha, 0.0);
        let params = ProtocolParams::new(a, a, c(0.1, 0.0), 1.0, target.clone(), scheme_design::DEFAULT_DELTA).unwrap();
        let rec = all_click(&run_full_protocol(&params).unwrap()).clone();
        let f = rec.state.fidelity_pure(&photon_pair_state(params.trunc)).unwrap();
        assert!(f > last, "alpha {alpha}: fidelity {f} not above {last}");
        if alpha <= 0.1 {
            assert!(f >= 0.95, "alpha {alpha}: fidelity {f}");
        }
        last = f;
    }
}

#[test]
fn displacement_variant_agrees_with_reference_beams() {
    for preset in [Preset::BellK1, Preset::QutritHigh] {
        let params = preset.params(0.1).unwrap();
        let full = run_full_protocol(&params).unwrap();
        let disp = run_displacement_protocol(&params).unwrap();
        for (f, d) in full.iter().zip(&disp) {
            assert_eq!(f.pattern, d.pattern);
            assert!((f.probability - d.probability).abs() < 1e-10, "{}", preset.name());
            if f.probability > 1e-8 {
                let td = f.state.trace_distance(&d.state).unwrap();
                assert!(
                    td < 10.0 * params.gamma.norm_sqr(),
                    "{} {}: {td}",
                    preset.name(),
                    f.pattern_label()
                );
            }
        }
    }
}

#[test]
fn probe_components_match_kerr_state_slices() {
    let params = Preset::BellK1.params(0.2).unwrap();
    let psi = kerr_state(&params).unwrap();
    let d = params.trunc.dim();
    for comp in probe_components(&params).unwrap().iter().take(6) {
        for ab in 0..d * d {
            let expected = psi.amplitudes()[ab * d + comp.n];
            let got = comp.weight * comp.state.amplitudes()[ab];
            assert!((expected - got).norm() < 1e-14);
        }
    }
}

#[test]
fn reference_network_emits_the_reference_beams() {
    let params = Preset::QutritHigh.params(0.1).unwrap();
    let s = &params.scheme;
    let amp = s.gtilde.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let trunc = TruncationSpec::for_amplitude(amp, 1e-20).unwrap();
    let refs = reference_beams(s, TruncationSpec::new(trunc.n_max() + 10, 1e-12).unwrap()).unwrap();
    let expected = FockVector::coherent_product(&detector_modes(2), &s.gtilde, *refs.trunc()).unwrap();
    let ov = inner(&expected, &refs).unwrap();
    assert!((ov - 1.0).norm() < 1e-10, "overlap {ov}");
}

// ---------------------------------------------------------------- elimination

#[test]
fn elimination_operator_annihilates_its_coherent_state() {
    let trunc = TruncationSpec::new(40, 1e-14).unwrap();
    for root in [c(0.1, 0.0), c(-0.05, 0.08), c(0.3, -0.2)] {
        let probe = FockVector::coherent_product(&["c"], &[root], trunc).unwrap();
        let out = fock_core::apply_single_mode(&probe, "c", &elimination_operator(trunc.dim(), root, 1, 0.7)).unwrap();
        assert!(out.norm_sqr().sqrt() < 1e-12);
        // A different state is not annihilated.
        let other = FockVector::coherent_product(&["c"], &[root + 0.1], trunc).unwrap();
        let out = fock_core::apply_single_mode(&other, "c", &elimination_operator(trunc.dim(), root, 1, 0.7)).unwrap();
        assert!((out.norm_sqr().sqrt() - 0.07).abs() < 1e-10);
    }
}

#[test]
fn multiple_roots_annihilate_photon_added_states() {
    let g = c(0.15, -0.1);
    for l in 1..=3 {
        for s in 0..l {
            assert!(pacs_annihilation_norm(g, s, l).unwrap() < 1e-10, "s={s}, l={l}");
        }
        // With as many added photons as eliminations the state survives.
        assert!(pacs_annihilation_norm(g, l, l).unwrap() > 0.1);
    }
}

#[test]
fn split_photon_added_state_never_clicks_everywhere() {
    for s in 1..=2 {
        let p = pacs_split_joint_click(c(0.2, 0.1), s).unwrap();
        assert!(p < 1e-10, "s={s}: joint click {p}");
    }
}

#[test]
fn elimination_is_sound_for_every_preset() {
    for preset in Preset::ALL {
        let params = preset.params(0.1).unwrap();
        for (j, p) in elimination_soundness(&params.scheme).unwrap().into_iter().enumerate() {
            assert!(p <= 1e-10, "{} detector {}: {p}", preset.name(), j + 1);
        }
    }
}

#[test]
fn detectors_fire_for_other_probes() {
    let params = Preset::BellK1.params(0.1).unwrap();
    let root = params.scheme.roots.expanded()[0];
    let probe = root + c(0.3, 0.0);
    let p = probe_click_probabilities(&params.scheme, probe).unwrap()[0];
    let expected = 1.0 - (-(params.scheme.q * 0.3f64).powi(2)).exp();
    assert!((p - expected).abs() < 1e-10, "{p} vs {expected}");
}

// ---------------------------------------------------------------- operator path

/// `Π_j (F̂ − y_j) |α⟩|β⟩` with `F̂ = e^{iχ(n̂_a + n̂_b)}`, built gate by gate.
fn product_form(params: &ProtocolParams) -> FockVector {
    let mut psi = FockVector::coherent_product(&["a", "b"], &[params.alpha, params.beta], params.trunc).unwrap();
    for root in params.scheme.roots.expanded() {
        let y = root / params.gamma;
        let rotated = apply_phase(&apply_phase(&psi, "a", params.chi).unwrap(), "b", params.chi).unwrap();
        let amps = rotated
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(r, p)| r - y * p)
            .collect();
        psi = psi.with_amplitudes(amps).unwrap();
    }
    psi
}

#[test]
fn single_photon_term_is_the_product_form() {
    for preset in [Preset::BellK1, Preset::QutritHigh, Preset::PhotonK2] {
        let params = preset.params(0.1).unwrap();
        let k = params.k();
        let term = operator_path_pure_term(&params, &vec![1; k]).unwrap();
        let expected = product_form(&params);
        let f = pure_fidelity(&term, &expected);
        assert!(f >= 1.0 - 1e-10, "{}: {f}", preset.name());
        let scale = (params.scheme.q * params.gamma.norm()).powi(k as i32);
        let ratio = term.norm_sqr().sqrt() / (scale * expected.norm_sqr().sqrt());
        assert!((ratio - 1.0).abs() < 1e-9, "{}: norm ratio {ratio}", preset.name());
        // ... and it is proportional to the target state.
        let target =
            analytic_target_state(&params.target, params.alpha, params.beta, params.chi, params.trunc).unwrap();
        assert!(pure_fidelity(&term, &target) > 1.0 - 1e-10);
    }
}

#[test]
fn operator_path_is_invariant_under_root_order() {
    let params = Preset::PhotonK2.params(0.1).unwrap();
    let roots = params.scheme.roots.expanded();
    let reversed: Vec<Complex64> = roots.iter().rev().copied().collect();
    let patterns = count_patterns(2, 3);
    let reversed_patterns: Vec<Vec<usize>> = patterns.iter().map(|p| p.iter().rev().copied().collect()).collect();
    let a = operator_path_sum_with_roots(&params, &roots, &patterns).unwrap();
    let b = operator_path_sum_with_roots(&params, &reversed, &reversed_patterns).unwrap();
    let td = a.normalized().trace_distance(&b.normalized()).unwrap();
    assert!(td <= 1e-12, "{td}");
    assert!((a.trace() / b.trace() - 1.0).abs() <= 1e-12);
    // A single term with its counts permuted along with the roots is unchanged too.
    let t1 = operator_path_final_state_with_roots(&params, &roots, &[1, 2]).unwrap();
    let t2 = operator_path_final_state_with_roots(&params, &reversed, &[2, 1]).unwrap();
    assert!(t1.normalized().trace_distance(&t2.normalized()).unwrap() <= 1e-12);
}

#[test]
fn operator_path_rejects_zero_counts() {
    let params = Preset::BellK1.params(0.1).unwrap();
    assert!(operator_path_final_state(&params, &[0]).is_err());
    assert!(operator_path_final_state(&params, &[1, 1]).is_err());
    assert!(operator_path_state(&params, 0).is_err());
}

#[test]
fn count_patterns_enumerate_the_grid() {
    let p = count_patterns(2, 3);
    assert_eq!(p.len(), 9);
    assert!(p.contains(&vec![1, 1]) && p.contains(&vec![3, 2]));
    assert!(p.iter().all(|x| x.iter().all(|&n| (1..=3).contains(&n))));
}

#[test]
fn operator_path_agrees_with_network_k1() {
    let params = Preset::BellK1.params(0.1).unwrap();
    let report = oracle_equivalence(&params, DEFAULT_N_CUT).unwrap();
    assert!(report.trace_distance <= 1e-6, "{report:?}");
    assert!((report.probability_full / report.probability_operator - 1.0).abs() < 1e-5);
}

#[test]
fn operator_path_agrees_with_network_k2() {
    let params = Preset::QutritHigh.params(0.1).unwrap();
    let report = oracle_equivalence(&params, DEFAULT_N_CUT).unwrap();
    assert!(report.trace_distance <= 1e-5, "{report:?}");
}

#[test]
fn residual_scales_quadratically() {
    let params = Preset::BellK1.params(0.1).unwrap();
    let (exponent, at, half) = residual_scaling(&params, DEFAULT_N_CUT).unwrap();
    assert!(half.residual / at.residual <= 0.25 * 1.5);
    assert!((1.7..=2.3).contains(&exponent), "exponent {exponent}");
}

#[test]
fn single_count_term_dominates_the_operator_sum() {
    let params = Preset::BellK1.params(0.1).unwrap();
    let one = operator_path_final_state(&params, &[1]).unwrap();
    let all = operator_path_state(&params, 3).unwrap();
    let ratio = one.trace() / all.trace();
    assert!(ratio < 1.0 && ratio > 1.0 - 3.0 * params.gamma.norm_sqr(), "{ratio}");
}

#[test]
fn invalid_parameters_are_rejected() {
    let t = Preset::BellK1.target();
    let a = c(1.0, 0.0);
    assert!(ProtocolParams::new(a, a, c(0.1, 0.0), 0.0, t.clone(), 1e-3).is_err());
    assert!(ProtocolParams::new(a, a, c(0.1, 0.0), 4.0, t.clone(), 1e-3).is_err());
    let other = design_scheme(&t, c(0.2, 0.0), 1e-3).unwrap();
    let trunc = TruncationSpec::new(20, 1e-12).unwrap();
    assert!(ProtocolParams::with_scheme(a, a, c(0.1, 0.0), 0.3, t, other, trunc).is_err());
    assert_eq!(Preset::from_name("qutrit-high"), Some(Preset::QutritHigh));
    assert_eq!(Preset::from_name("nope"), None);
}
