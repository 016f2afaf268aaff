//! Black-box checks of the command-line interface: exit codes, report
//! schema, parameter substitution, and environment overrides.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beltrami"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (Option<i32>, Value) {
    let out = run(args);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON for {args:?}: {e}"));
    (out.status.code(), v)
}

#[test]
fn verify_passes_and_documents_mismatches() {
    let (code, v) = run_json(&["verify"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["seed"], 0);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 20);
    for row in results {
        let verdict = row["verdict"].as_str().unwrap();
        assert!(verdict == "PASS" || verdict == "MISMATCH", "{row}");
        if verdict == "MISMATCH" {
            assert!(
                row["difference"].is_string(),
                "mismatch without a recorded difference: {row}"
            );
        }
    }
}

#[test]
fn strict_mode_fails_on_documented_mismatches() {
    let out = run(&["verify", "--strict"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn single_claim_selection_works() {
    let (code, v) = run_json(&["verify", "--claims", "K-eq7,sphere-T1"]);
    assert_eq!(code, Some(0));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(results[0]["claim_id"], "K-eq7");
    assert_eq!(results[1]["claim_id"], "sphere-T1");
}

#[test]
fn unknown_claim_exits_five() {
    let out = run(&["verify", "--claims", "no-such-claim"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn malformed_arguments_exit_three() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(
        run(&["forms", "--surface", "anchor-ring", "--kappa", "abc"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["forms", "--surface", "tube", "--radius", "-1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["finite-type", "--surface", "tube", "--profile", "bogus"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn budget_overflow_exits_four_and_numeric_mode_recovers() {
    let starved = run(&[
        "laplace", "--surface", "tube", "--target", "gaussmap", "--k", "3", "--budget", "50",
    ]);
    assert_eq!(starved.status.code(), Some(4));

    let (code, v) = run_json(&[
        "laplace", "--surface", "tube", "--target", "gaussmap", "--k", "3", "--budget", "50",
        "--numeric",
    ]);
    assert_eq!(code, Some(0));
    let results = v["results"].as_array().unwrap();
    assert!(
        results.iter().any(|row| row["numeric"] == true),
        "expected sampled rows after the budget stop"
    );
}

#[test]
fn sphere_forms_report_expected_curvatures() {
    let (code, v) = run_json(&["forms", "--surface", "sphere", "--radius", "2"]);
    assert_eq!(code, Some(0));
    let results = v["results"].as_array().unwrap();
    let curv = results
        .iter()
        .find(|r| r["gauss_curvature"].is_string())
        .unwrap();
    assert_eq!(curv["gauss_curvature"], "1/4");
    assert_eq!(curv["mean_curvature"], "1/2");
}

#[test]
fn ring_forms_substitute_parameters() {
    let (code, v) = run_json(&[
        "forms", "--surface", "anchor-ring", "--kappa", "1", "--radius", "1/2",
    ]);
    assert_eq!(code, Some(0));
    let results = v["results"].as_array().unwrap();
    let first = results.iter().find(|r| r["form"] == "I").unwrap();
    assert_eq!(first["g11"], "delta^2");
    assert_eq!(first["g12"], "0");
    assert_eq!(first["g22"], "1/4");
}

#[test]
fn first_gauss_map_iterate_prints_frame_components() {
    let (code, v) = run_json(&[
        "laplace", "--surface", "tube", "--target", "gaussmap", "--k", "1",
    ]);
    assert_eq!(code, Some(0));
    let row = &v["results"].as_array().unwrap()[0];
    assert_eq!(row["order"], 1);
    assert_eq!(row["basis"], "frame");
    for comp in ["t", "h", "b"] {
        assert!(row[comp].is_string(), "missing component {comp}: {row}");
    }
}

#[test]
fn finite_type_verdicts_match_chart_kind() {
    let (code, v) = run_json(&["finite-type", "--surface", "sphere", "--k-max", "3"]);
    assert_eq!(code, Some(0));
    let row = &v["results"].as_array().unwrap()[0];
    assert_eq!(row["verdict_text"], "FiniteTypeCandidate(1)");

    let (code, v) = run_json(&["finite-type", "--surface", "anchor-ring", "--k-max", "5"]);
    assert_eq!(code, Some(0));
    let row = &v["results"].as_array().unwrap()[0];
    assert_eq!(row["verdict_text"], "InfiniteTypeEvidence");
    assert_eq!(row["ranks"], serde_json::json!([2, 3, 4, 5, 6]));
}

#[test]
fn claim_and_surface_listings_are_complete() {
    let (code, v) = run_json(&["list-claims"]);
    assert_eq!(code, Some(0));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 20);
    let documented = results
        .iter()
        .filter(|r| r["documented_discrepancy"] == true)
        .count();
    assert_eq!(documented, 6);

    let (code, v) = run_json(&["list-surfaces"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
}

#[test]
fn output_formats_cover_csv_and_pretty() {
    let out = run(&["forms", "--surface", "tube", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.split(',').any(|c| c == "g11"), "header: {header}");
    assert!(lines.clone().count() >= 4);

    let out = run(&["verify", "--claims", "K-eq7", "--format", "pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let (_, v) = run_json(&["verify", "--claims", "K-eq7", "--seed", "31"]);
    assert_eq!(v["seed"], 31);

    let out = Command::new(env!("CARGO_BIN_EXE_beltrami"))
        .args(["verify", "--claims", "K-eq7"])
        .env("BELTRAMI_SEED", "77")
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 77);
}

#[test]
fn config_echoes_tolerance_and_samples() {
    let (_, v) = run_json(&[
        "finite-type", "--surface", "sphere", "--k-max", "2", "--tol", "1e-5", "--samples",
        "40",
    ]);
    assert_eq!(v["config"]["tol"], "1e-5");
    assert_eq!(v["config"]["samples"], "40");
}
