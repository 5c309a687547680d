//! Randomized invariants of the noise channels and the fidelity breakdown.

use noise_model::*;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use scheme_design::{solve_roots, TargetCoefficients};

fn config() -> Config {
    Config {
        cases: 100,
        rng_seed: RngSeed::Fixed(0x401_5e5d),
        failure_persistence: None,
        ..Config::default()
    }
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

fn coeffs() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex_in(0.1, 2.0), 2..=3)
}

fn noise() -> impl Strategy<Value = NoiseParams> {
    (
        (0.0f64..5.0, 0.0f64..1e-3, 0.0f64..1e-3, 0.0f64..1e-5),
        (1e-3f64..1.0, 0.0f64..1e-8, -0.02f64..0.02, -0.02f64..0.02),
    )
        .prop_map(|((lc, lk, ls, dp), (ld, z, ea, eb))| NoiseParams {
            lambda_channel: lc,
            lambda_kerr: lk,
            lambda_storage: ls,
            dphi2: dp,
            lambda_det: ld,
            zeta: z,
            eps_ac: ea,
            eps_bc: eb,
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn m0_keeps_hermiticity_and_diagonal(
        c in coeffs(),
        alpha in complex_in(0.5, 4.0),
        chi in 0.01f64..1.0,
        eta1 in -1.0f64..1.0,
        eta2 in 0.0f64..1.0,
    ) {
        let rho = CoeffPairState::pure(&c, alpha, alpha, chi);
        let out = apply_m0(&rho, eta1, eta2);
        prop_assert!(out.hermiticity_defect() < 1e-12);
        for n in 0..c.len() {
            prop_assert!((out.rho()[(n, n)] - rho.rho()[(n, n)]).norm() < 1e-14);
        }
    }

    #[test]
    fn discrete_phase_channel_keeps_trace(
        c in coeffs(),
        alpha in complex_in(0.5, 4.0),
        chi in 0.01f64..1.0,
        lambda in 0.0f64..5.0,
        gamma in complex_in(0.01, 0.5),
    ) {
        let rho = CoeffPairState::pure(&c, alpha, alpha, chi);
        let out = apply_discrete_phase_channel(&rho, lambda, gamma, chi);
        prop_assert!((out.trace() / rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(out.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn breakdown_terms_are_nonnegative(
        c in coeffs(),
        noise in noise(),
        a2 in 4.0f64..20.0,
        x in 1e-3f64..0.5,
        gamma in complex_in(0.05, 0.2),
    ) {
        let alpha = Complex64::new(a2.sqrt(), 0.0);
        let chi = (x / a2).sqrt();
        let target = TargetCoefficients::new(c).unwrap();
        let b = fidelity_leading_order(&target, &noise, alpha, alpha, gamma, chi).unwrap();
        prop_assert!(b.terms().iter().all(|&t| t >= 0.0), "{:?}", b.terms());
        prop_assert!((0.0..=1.0).contains(&b.fidelity));
        let f = pipeline_fidelity(&target, &noise, alpha, alpha, gamma, chi).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&f), "{}", f);
    }

    #[test]
    fn dark_count_weight_grows_with_rate(
        c in coeffs(),
        x in 1e-2f64..1.0,
        zeta in 1e-9f64..1e-6,
    ) {
        let a2 = 10.0f64;
        let alpha = Complex64::new(a2.sqrt(), 0.0);
        let chi = (x / a2).sqrt();
        let gamma = Complex64::new(0.1, 0.0);
        let target = TargetCoefficients::new(c).unwrap();
        let roots = solve_roots(&target, gamma).unwrap();
        let lo = dark_count_mixture(&target, &roots, alpha, alpha, chi, gamma, 0.1, zeta).unwrap();
        let hi = dark_count_mixture(&target, &roots, alpha, alpha, chi, gamma, 0.1, 2.0 * zeta).unwrap();
        prop_assert!(hi.trace() >= lo.trace());
        prop_assert!(lo.trace() >= 1.0 - 1e-9);
    }
}
