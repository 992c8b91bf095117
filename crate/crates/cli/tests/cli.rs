use std::process::{Command, Output};

use serde_json::Value;

fn wco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wco")).args(args).env_remove("WCO_OUT_DIR").output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn failed_checks(doc: &Value) -> Vec<String> {
    doc["summary"]["failed_check_names"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect()
}

#[test]
fn unitary_sweep_passes() {
    let out = wco(&["certify", "--family", "unitary", "--draws", "25", "--seed", "7", "--order", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["summary"]["draws_passed"], 25);
    assert_eq!(doc["results"].as_array().unwrap().len(), 25);
    assert_eq!(doc["schema"], "wco-report/1");
}

#[test]
fn identical_runs_give_identical_reports() {
    let args = ["certify", "--family", "normal-interior", "--draws", "6", "--seed", "3", "--order", "64"];
    let mut docs: Vec<Value> = (0..2).map(|_| report(&wco(&args))).collect();
    for doc in &mut docs {
        doc.as_object_mut().unwrap().remove("duration_seconds");
    }
    assert_eq!(docs[0], docs[1]);
    let other = report(&wco(&["certify", "--family", "normal-interior", "--draws", "6", "--seed", "4", "--order", "64"]));
    assert_ne!(docs[0]["results"], other["results"]);
}

#[test]
fn origin_parameters_pass() {
    let out = wco(&["certify", "--family", "cs-2.3", "--params", r#"{"p": 0, "a0": 0.3, "a1": 0.4, "c": 1}"#]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let conjugation = &doc["results"][0]["report"]["conjugation"];
    assert_eq!(conjugation["lambda"], serde_json::json!([-1.0, 0.0]));
}

#[test]
fn rejected_parameters_exit_with_failure() {
    // 0.3 + 0.5 z/(1 - 0.3 z) sends 1 outside the disk
    let out = wco(&["certify", "--family", "cs", "--params", r#"{"p": 0, "a0": 0.3, "a1": 0.5, "c": 1}"#]);
    assert_eq!(out.status.code(), Some(1));
    let doc = report(&out);
    assert_eq!(failed_checks(&doc), vec!["constructor"]);
    assert!(doc["results"][0]["error"].as_str().unwrap().contains("self-map"));
}

#[test]
fn unbalanced_boundary_map_names_the_failed_precondition() {
    let out = wco(&["certify", "--family", "boundary-normal", "--params", r#"{"b": 0.2, "c": 0.3}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(failed_checks(&report(&out)).contains(&"lemma-bc-|b|=|c|".to_string()));
}

#[test]
fn classify_examples() {
    let out = wco(&["classify", "--psi", "exp(sin(z))", "--phi", "-z", "--order", "96"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let classification = &doc["results"][0]["report"]["classification"];
    assert_eq!(classification["case_tag"], "involution-odd-weight");
    assert_eq!(doc["results"][0]["report"]["checks"][0]["name"], "annihilation");

    let doc = report(&wco(&["classify", "--psi", "5", "--phi", "z"]));
    assert_eq!(doc["results"][0]["report"]["classification"]["degree"], 1);

    let out = wco(&["classify", "--psi", "exp(z^2)", "--phi", "-z"]);
    assert_eq!(out.status.code(), Some(1));
    let classification = &report(&out)["results"][0]["report"]["classification"];
    assert_eq!(classification["verdict"], "not-algebraic");
    assert_eq!(classification["reason"]["kind"], "even-log-term");
}

#[test]
fn input_errors_exit_with_two() {
    let cases: [&[&str]; 7] = [
        &["certify", "--family", "bogus", "--draws", "1"],
        &["certify", "--family", "unitary", "--draws", "2", "--order", "4"],
        &["certify", "--family", "unitary", "--draws", "2", "--safety-radius", "1.5"],
        &["certify", "--family", "unitary", "--draws", "2", "--tol", "-1"],
        &["certify", "--family", "unitary", "--params", "{not json"],
        &["certify", "--family", "algebraic", "--draws", "3"],
        &["classify", "--psi", "exp(", "--phi", "z"],
    ];
    for args in cases {
        let out = wco(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn out_path_honours_the_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_wco"))
        .args(["certify", "--family", "hermitian", "--draws", "2", "--order", "32", "--out", "sweep/report.json"])
        .env("WCO_OUT_DIR", dir.path())
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("sweep/report.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["summary"]["draws"], 2);
}
