//! Randomized invariants of the protocol simulation.

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use protocol_sim::*;
use scheme_design::{poly_from_roots, TargetCoefficients};

fn config() -> Config {
    Config {
        cases: 100,
        rng_seed: RngSeed::Fixed(0x9e37_79b9),
        failure_persistence: None,
        ..Config::default()
    }
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

/// Target whose design roots (in units of γ) are well separated and of order one.
fn target(k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TargetCoefficients> {
    prop::collection::vec(complex_in(0.3, 1.5), k)
        .prop_filter("roots too close", |ys| {
            ys.iter()
                .enumerate()
                .all(|(i, a)| ys[i + 1..].iter().all(|b| (a - b).norm() > 0.1))
        })
        .prop_map(|ys| TargetCoefficients::new(poly_from_roots(&ys)).unwrap())
}

fn params(
    target: TargetCoefficients,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    chi: f64,
    delta: f64,
) -> ProtocolParams {
    ProtocolParams::new(alpha, beta, gamma, chi, target, delta).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn outcome_probabilities_sum_to_one(
        t in target(1..=2),
        alpha in complex_in(0.1, 1.5),
        beta in complex_in(0.1, 1.5),
        gamma in complex_in(0.05, 0.25),
        chi in 0.1f64..std::f64::consts::PI,
        delta in 0.05f64..0.3,
    ) {
        let p = params(t, alpha, beta, gamma, chi, delta);
        let records = run_full_protocol(&p).unwrap();
        prop_assert_eq!(records.len(), 1 << p.k());
        let total: f64 = records.iter().map(|r| r.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "total {}", total);
    }

    #[test]
    fn detectors_never_fire_on_their_own_root(t in target(1..=3), gamma in complex_in(0.05, 0.3), delta in 0.05f64..0.3) {
        let p = params(t, Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), gamma, 0.5, delta);
        for (j, prob) in elimination_soundness(&p.scheme).unwrap().into_iter().enumerate() {
            prop_assert!(prob <= 1e-10, "detector {}: {}", j + 1, prob);
        }
    }

    #[test]
    fn operator_path_ignores_root_order(
        t in target(2..=2),
        alpha in complex_in(0.1, 1.2),
        gamma in complex_in(0.05, 0.25),
        chi in 0.1f64..std::f64::consts::PI,
    ) {
        let p = params(t, alpha, alpha, gamma, chi, 0.1);
        let roots = p.scheme.roots.expanded();
        let reversed: Vec<Complex64> = roots.iter().rev().copied().collect();
        let patterns = count_patterns(2, 2);
        let a = operator_path_sum_with_roots(&p, &roots, &patterns).unwrap();
        let b = operator_path_sum_with_roots(&p, &reversed, &patterns).unwrap();
        let td = a.normalized().trace_distance(&b.normalized()).unwrap();
        prop_assert!(td <= 1e-12, "trace distance {}", td);
    }
}
