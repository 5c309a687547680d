//! End-to-end runs of the `kerrgen` binary.

use std::process::{Command, Output};

fn kerrgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows as maps from column name to text.
fn rows(csv_text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let body: String = csv_text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            header
                .iter()
                .zip(rec.unwrap().iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

fn note(csv_text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    csv_text
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}`"))
        .to_string()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn degenerate_target_is_a_config_error() {
    let out = kerrgen(&["design", "--coeffs", "1,0", "--alpha", "1", "--chi", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("leading coefficient"));
    for bad in [
        vec!["design"],
        vec!["design", "--preset", "bell-k1", "--chi", "4"],
        vec!["design", "--preset", "bell-k1", "--K", "2"],
        vec!["design", "--preset", "bell-k1", "--delta", "1.5"],
        vec!["design", "--coeffs", "1,2"],
        vec!["design", "--bogus"],
    ] {
        assert_eq!(kerrgen(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn strongly_distinguishable_qutrit_roots_are_symmetric() {
    let text = stdout(&kerrgen(&["design", "--preset", "maxent-k2-high"]));
    let r = rows(&text);
    assert_eq!(r.len(), 2);
    // Reference phase 2|α|²χ = 100 rad.
    let wrap = |p: f64| (p + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    let mut rel: Vec<f64> = r.iter().map(|row| wrap(num(&row["root_arg"]) - 100.0)).collect();
    rel.sort_by(f64::total_cmp);
    let third = std::f64::consts::FRAC_PI_3;
    assert!(
        (rel[0] + third).abs() < 1e-9 && (rel[1] - third).abs() < 1e-9,
        "{rel:?}"
    );
    assert!(r.iter().all(|row| (num(&row["root_abs"]) - 0.1).abs() < 1e-12));
}

#[test]
fn photon_correlated_preset_coefficients() {
    let text = stdout(&kerrgen(&[
        "design",
        "--preset",
        "photon-correlated",
        "--s",
        "2",
        "--K",
        "2",
    ]));
    let (c, s) = (1f64.cos(), 1f64.sin());
    let expected = format!("{}+{}i {}-{}i 1+0i", c, s, -1.0 - c, s);
    assert_eq!(note(&text, "coeffs"), expected);
}

#[test]
fn scheme_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("kerrgen-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let scheme = dir.join("scheme.json");
    let scheme_s = scheme.to_str().unwrap();
    stdout(&kerrgen(&[
        "design",
        "--preset",
        "bell-k1",
        "--gamma",
        "0.2",
        "--scheme-out",
        scheme_s,
    ]));
    let direct = stdout(&kerrgen(&["simulate", "--preset", "bell-k1", "--gamma", "0.2"]));
    let from_file = stdout(&kerrgen(&["simulate", "--preset", "bell-k1", "--scheme", scheme_s]));
    assert_eq!(direct, from_file);
    let wrong_k = kerrgen(&["simulate", "--preset", "maxent-k2-high", "--scheme", scheme_s]);
    assert_eq!(wrong_k.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bell_simulation_table() {
    let text = stdout(&kerrgen(&["simulate", "--preset", "bell-k1"]));
    let r = rows(&text);
    let total: f64 = r.iter().map(|row| num(&row["probability"])).sum();
    assert!((total - 1.0).abs() < 1e-9, "{total}");
    let all = r.iter().find(|row| row["pattern"] == "1").unwrap();
    assert!(num(&all["fidelity_vs_target"]) >= 0.99);
    assert!((num(&all["entanglement"]) - 1.0).abs() <= 0.02);
    assert!(num(&all["oracle_residual"]) <= 1e-5);
    let none = r.iter().find(|row| row["pattern"] == "0").unwrap();
    assert_eq!(none["oracle_residual"], "");
    assert!(text.contains("# Lambda=0\n"));
}

#[test]
fn noisy_simulation_reports_breakdown() {
    let text = stdout(&kerrgen(&[
        "simulate",
        "--preset",
        "bell-k1",
        "--Lambda1",
        "1e-3",
        "--Lambda2",
        "1e-3",
        "--dphi2",
        "1e-5",
        "--eps-ac",
        "0.01",
        "--eps-bc",
        "0.01",
    ]));
    let lead = num(&note(&text, "noisy_fidelity_leading_order"));
    let exact = num(&note(&text, "noisy_fidelity_pipeline"));
    assert!(lead < 1.0 && exact < 1.0);
    assert!(
        ((1.0 - lead) - (1.0 - exact)).abs() <= 0.1 * (1.0 - exact),
        "{lead} vs {exact}"
    );
    assert_eq!(num(&note(&text, "t_darkcount")), 0.0);
}

#[test]
fn oversized_amplitude_is_a_truncation_error() {
    let out = kerrgen(&["simulate", "--preset", "bell-k1", "--alpha", "12"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn scan_rows_and_determinism() {
    let args = ["entangle-scan", "--x-grid", "1e-4,1,100", "--ks", "1,2,3"];
    let first = stdout(&kerrgen(&args));
    let second = stdout(&kerrgen(&args));
    assert_eq!(first, second);
    let r = rows(&first);
    assert_eq!(r.len(), 3 * (1 + 3 + 7));
    let get = |x: &str, k: &str, p: &str| {
        num(&r
            .iter()
            .find(|row| row["x"] == x && row["K"] == k && row["pattern"] == p)
            .unwrap()["entropy"])
    };
    for x in ["0.0001", "1", "100"] {
        assert!((get(x, "1", "1") - 1.0).abs() < 1e-6);
        assert!(get(x, "1", "1") < get(x, "2", "11") && get(x, "2", "11") < get(x, "3", "111"));
    }
    assert!((get("0.0001", "2", "11") - 1.5).abs() < 5e-3);
    assert!((get("100", "2", "11") - 3f64.log2()).abs() < 5e-3);
    // The scheme optimized for three clicks also yields a maximally entangled
    // two-term state when two detectors stay silent.
    assert!((get("1", "3", "010") - 1.0).abs() < 1e-3);
    assert!(r.iter().all(|row| row["converged"] == "true"));
}

#[test]
fn scan_seed_is_echoed_and_invalid_grids_rejected() {
    let text = stdout(&kerrgen(&[
        "entangle-scan",
        "--x-grid",
        "1",
        "--ks",
        "1",
        "--seed",
        "7",
    ]));
    assert_eq!(note(&text, "seed"), "7");
    assert_eq!(
        kerrgen(&["entangle-scan", "--x-grid", "-1", "--ks", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kerrgen(&["entangle-scan", "--x-grid", "1", "--ks", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn feasibility_reach() {
    let text = stdout(&kerrgen(&["feasibility", "--K", "1"]));
    let max_db = num(&note(&text, "dark_count_cutoff_db"));
    assert!((20.0..=28.0).contains(&max_db), "{max_db}");
    assert!((num(&note(&text, "max_distance_km")) - 137.3).abs() < 0.1);
    let r = rows(&text);
    let loss: Vec<_> = r.iter().filter(|row| row["sweep"] == "loss").collect();
    assert_eq!(loss.len(), 61);
    assert!(loss.iter().all(|row| num(&row["fidelity"]) == 0.9));
    let p = |db: &str| num(&loss.iter().find(|row| row["attenuation_db"] == db).unwrap()["probability"]);
    assert!(p("27") > 0.0 && p("28") == 0.0);
    assert_eq!(r.iter().filter(|row| row["sweep"] == "fidelity").count(), 5);
    assert_eq!(note(&text, "all_conditions_pass"), "true");
}

#[test]
fn feasibility_flags_failed_requirements() {
    let text = stdout(&kerrgen(&[
        "feasibility",
        "--K",
        "2",
        "--Lambda2",
        "0.1",
        "--db-grid",
        "0:1:1",
    ]));
    assert_eq!(note(&text, "all_conditions_pass"), "false");
    assert!(note(&text, "condition_storage_loss").ends_with("pass=false"));
    assert_eq!(kerrgen(&["feasibility", "--K", "3"]).status.code(), Some(2));
    assert_eq!(kerrgen(&["feasibility", "--db-grid", "5:1:1"]).status.code(), Some(2));
    assert_eq!(kerrgen(&["feasibility", "--fidelity", "1.2"]).status.code(), Some(2));
}

#[test]
fn json_output_is_well_formed() {
    let out = stdout(&kerrgen(&["feasibility", "--db-grid", "0:10:5", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["parameters"]["command"], "feasibility");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 + 5);
    assert!(v["rows"][0]["probability"].as_f64().unwrap() > 0.0);
}
