//! End-to-end tests of the `odds` binary: documents, exit codes, warnings,
//! and determinism of every subcommand.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn odds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_secretary3(dir: &Path) -> PathBuf {
    let path = dir.join("secretary3.json");
    let out = odds(&[
        "gen",
        "--secretary",
        "--n",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    path
}

#[test]
fn gen_secretary3_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["p"][0], 1.0);
    assert_eq!(doc["p"][1], 0.5);
    assert_eq!(doc["rewards"][2], 1.0);
    assert!((doc["rewards"][0].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-15);
}

#[test]
fn gen_last_success_from_p_list() {
    let out = odds(&[
        "gen",
        "--variant",
        "last-success",
        "--p-list",
        "0.5,0.5,0.5",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["rewards"][0], 0.25);
    assert_eq!(doc["rewards"][1], 0.5);
    assert_eq!(doc["rewards"][2], 1.0);
}

#[test]
fn gen_rejects_bad_variant_parameters() {
    let out = odds(&[
        "gen",
        "--variant",
        "k-of-last-l",
        "--k",
        "2",
        "--l",
        "1",
        "--p-list",
        "0.5,0.5,0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k"));
}

#[test]
fn solve_all_methods_agree_on_secretary3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let out = odds(&["solve", "--input", path.to_str().unwrap(), "--method", "all"]);
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert_eq!(doc["checks"]["agreement"], true);
    assert_eq!(doc["checks"]["odds_applicable"], true);
    assert_eq!(doc["policy"]["stop"], serde_json::json!([false, true, true]));
    assert_eq!(doc["method"], "all");
}

#[test]
fn solve_dp_on_a_single_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n1.json");
    fs::write(&path, r#"{"n": 1, "p": [0.5], "rewards": [1.0]}"#).unwrap();
    let out = odds(&["solve", "--input", path.to_str().unwrap(), "--method", "dp"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], 0.5);
    assert_eq!(doc["policy"]["stop"][0], true);
}

#[test]
fn solve_rejects_malformed_files_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ definitely not json").unwrap();
    let out = odds(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let missing = odds(&["solve", "--input", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn solve_output_is_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let strip = |out: &Output| {
        let mut doc = stdout_json(out);
        doc.as_object_mut().unwrap().remove("timing_ms");
        doc
    };
    let a = odds(&["solve", "--input", path.to_str().unwrap(), "--method", "all"]);
    let b = odds(&["solve", "--input", path.to_str().unwrap(), "--method", "all"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn odds_theorem_warns_on_foreign_rewards() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uniformish.json");
    fs::write(
        &path,
        r#"{"n": 2, "p": [0.5, 0.5], "rewards": [0.9, 0.1]}"#,
    )
    .unwrap();
    let out = odds(&[
        "solve",
        "--input",
        path.to_str().unwrap(),
        "--method",
        "odds-theorem",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn verify_passes_on_secretary3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let out = odds(&["verify", "--input", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_passed"], true);
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for expected in [
        "simplex_ff_agreement",
        "duality_gap",
        "complementary_slackness",
        "roundtrip_policy_flow_policy",
        "roundtrip_flow_policy_flow",
        "odds_theorem_agreement",
    ] {
        assert!(names.contains(&expected), "missing check {expected}");
    }
}

#[test]
fn verify_passes_on_generated_random_instances() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, variant, extra) in [
        (11u64, "last-success", vec![]),
        (12, "mth-last", vec!["--m", "2"]),
        (13, "any-of-last-m", vec!["--m", "3"]),
        (14, "k-of-last-l", vec!["--k", "2", "--l", "3"]),
    ] {
        let path = dir.path().join(format!("rand{seed}.json"));
        let mut args = vec![
            "gen".to_string(),
            "--variant".into(),
            variant.into(),
            "--n".into(),
            "9".into(),
            "--seed".into(),
            seed.to_string(),
            "--output".into(),
            path.to_str().unwrap().into(),
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        let gen_out = Command::new(env!("CARGO_BIN_EXE_odds"))
            .args(&args)
            .output()
            .unwrap();
        assert!(gen_out.status.success(), "gen failed for {variant}");
        let out = odds(&["verify", "--input", path.to_str().unwrap()]);
        let doc = stdout_json(&out);
        assert_eq!(doc["all_passed"], true, "verify failed for {variant}");
    }
}

#[test]
fn verify_check_files_flags_corrupted_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_secretary3(dir.path());
    let solution = dir.path().join("solution.json");
    let out = odds(&[
        "solve",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        solution.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // The genuine document passes.
    let ok = odds(&[
        "verify",
        "--input",
        inst.to_str().unwrap(),
        "--check-files",
        solution.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));

    // Corrupt the value: exit code 2 and a failing report.
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&solution).unwrap()).unwrap();
    doc["value"] = serde_json::json!(0.75);
    fs::write(&solution, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let bad = odds(&[
        "verify",
        "--input",
        inst.to_str().unwrap(),
        "--check-files",
        solution.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["all_passed"], false);
}

#[test]
fn simulate_is_reproducible_and_tracks_the_exact_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let args = [
        "simulate",
        "--input",
        path.to_str().unwrap(),
        "--trials",
        "1000000",
        "--seed",
        "42",
        "--workers",
        "2",
        "--compare-exact",
    ];
    let a = odds(&args);
    let b = odds(&args);
    assert_eq!(a.stdout, b.stdout, "same seed and workers must be bit-identical");
    let doc = stdout_json(&a);
    assert_eq!(doc["trials"], 1_000_000);
    assert_eq!(doc["generator"], "chacha8");
    assert_eq!(doc["workers"], 2);
    assert_eq!(doc["exact"], 0.5);
    assert!(doc["z_score"].as_f64().unwrap().abs() <= 4.0);
}

#[test]
fn simulate_all_continue_policy_estimates_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_secretary3(dir.path());
    let pol = dir.path().join("continue.json");
    fs::write(&pol, r#"{"pi": [1.0, 1.0, 1.0]}"#).unwrap();
    let out = odds(&[
        "simulate",
        "--input",
        inst.to_str().unwrap(),
        "--policy",
        pol.to_str().unwrap(),
        "--trials",
        "1000",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["estimate"], 0.0);
    assert_eq!(doc["stderr"], 0.0);
}

#[test]
fn simulate_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_secretary3(dir.path());
    let out = odds(&[
        "simulate",
        "--input",
        inst.to_str().unwrap(),
        "--trials",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_lp_text_names_the_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n1.json");
    fs::write(&path, r#"{"n": 1, "p": [0.5], "rewards": [1.0]}"#).unwrap();
    let out = odds(&[
        "export-lp",
        "--input",
        path.to_str().unwrap(),
        "--formulation",
        "ff",
        "--format",
        "lp-text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["Cap_1", "Cons_1", "Source"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn export_dual_p_has_2n_plus_1_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    let out = odds(&[
        "export-lp",
        "--input",
        path.to_str().unwrap(),
        "--formulation",
        "dual-p",
        "--format",
        "mps",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = text[text.find("ROWS").unwrap()..text.find("COLUMNS").unwrap()]
        .lines()
        .filter(|l| l.starts_with(" L ") || l.starts_with(" G ") || l.starts_with(" E "))
        .count();
    assert_eq!(rows, 7);
}

#[test]
fn export_is_bit_exact_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_secretary3(dir.path());
    for (form, fmt) in [("ff", "mps"), ("dual-p1", "lp-text"), ("secretary-reduced", "mps")] {
        let args = [
            "export-lp",
            "--input",
            path.to_str().unwrap(),
            "--formulation",
            form,
            "--format",
            fmt,
        ];
        let a = odds(&args);
        let b = odds(&args);
        assert!(a.status.success(), "{form}/{fmt} failed");
        assert_eq!(a.stdout, b.stdout, "{form}/{fmt} not deterministic");
    }
}

#[test]
fn secretary_reduced_export_requires_a_secretary_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.json");
    fs::write(&path, r#"{"n": 2, "p": [0.5, 0.5], "rewards": [0.5, 1.0]}"#).unwrap();
    let out = odds(&[
        "export-lp",
        "--input",
        path.to_str().unwrap(),
        "--formulation",
        "secretary-reduced",
        "--format",
        "mps",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn variant_instance_files_are_loaded_through_the_rewards_module() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("variant.json");
    fs::write(
        &path,
        r#"{"n": 3, "p": [0.5, 0.5, 0.5], "variant": {"kind": "last-success"}}"#,
    )
    .unwrap();
    let out = odds(&["solve", "--input", path.to_str().unwrap(), "--method", "all"]);
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert_eq!(doc["checks"]["odds_applicable"], true);
}
