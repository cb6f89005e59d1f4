use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn schubert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schubert"))
        .args(args)
        .env_remove("SCHUBERT_CHAIN_GUARD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_writes_a_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = schubert(&["verify", "degree", "--n", "4", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let json: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["check"], "degree");
    assert_eq!(json["permutations_checked"], 24);
    assert_eq!(json["status"], "pass");
    assert_eq!(json["mode"], "exhaustive");
}

#[test]
fn verify_samples_above_the_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let csv = dir.path().join("summary.csv");
    let out = schubert(&[
        "verify",
        "staircase",
        "--n",
        "7",
        "--sample",
        "50",
        "--seed",
        "3",
        "--out",
        report.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["mode"], "sampled");
    assert_eq!(json["seed"], 3);
    assert_eq!(json["kind"], "conjecture");
    assert_eq!(json["conjecture_counterexample"], false);
    assert_eq!(json["permutations_checked"], 50);
    let lines: Vec<String> = fs::read_to_string(&csv).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("check,"));
    assert_eq!(lines[1], "staircase,conjecture,7,sampled,3,50,pass,0");
}

#[test]
fn verify_all_small() {
    let out = schubert(&["verify", "all", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(": pass")).count(), 12);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(schubert(&["verify", "bogus", "--n", "3"]).status.code(), Some(2));
    assert_eq!(schubert(&["verify", "degree", "--n", "0"]).status.code(), Some(2));
    assert_eq!(schubert(&["expand", "1123"]).status.code(), Some(2));
    assert_eq!(schubert(&["audit", "265143", "--chain", "1,2"]).status.code(), Some(2));
}

#[test]
fn expand_bottom_component_leads_with_the_lehmer_code() {
    let out = schubert(&["expand", "31452", "--order", "asc", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = json["terms"].as_array().unwrap();
    let degree = |t: &Value| t["exp"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).sum::<u64>();
    let bottom = terms.iter().map(degree).min().unwrap();
    assert_eq!(bottom, 4);
    let first_bottom = terms.iter().find(|t| degree(t) == bottom).unwrap();
    assert_eq!(first_bottom["exp"], serde_json::json!([2, 0, 1, 1, 0]));
}

#[test]
fn expand_pipelines_agree() {
    for kind in ["grothendieck", "schubert"] {
        let a = schubert(&["expand", "256341", "--pipeline", "chains", "--kind", kind]);
        let b = schubert(&["expand", "256341", "--pipeline", "divdiff", "--kind", kind]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(stdout(&a), stdout(&b));
    }
    let id = schubert(&["expand", "1234"]);
    assert_eq!(stdout(&id).trim(), "1");
}

#[test]
fn chain_guard_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_schubert"))
        .args(["expand", "256341", "--pipeline", "chains"])
        .env("SCHUBERT_CHAIN_GUARD", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn chains_as_json() {
    let out = schubert(&["chains", "256341", "--construction", "greedy", "--json"]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json[0]["construction"], "greedy");
    assert_eq!(json[0]["links"], serde_json::json!([[1, 4], [1, 5], [1, 2], [1, 3], [2, 3], [4, 5]]));
    assert_eq!(json[0]["weight"], serde_json::json!([1, 3, 3, 1, 1, 0]));
    let interp = schubert(&["chains", "5721463", "--construction", "interp:4", "--json"]);
    let json: Value = serde_json::from_slice(&interp.stdout).unwrap();
    assert_eq!(json[0]["links"][5], serde_json::json!([4, 5]));
    let every = schubert(&["chains", "256341", "--construction", "every"]);
    assert_eq!(stdout(&every).lines().filter(|l| l.starts_with("chain ")).count(), 6);
    assert_eq!(schubert(&["chains", "123", "--construction", "zigzag"]).status.code(), Some(2));
}

#[test]
fn diagram_of_the_identity_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("d.svg");
    let out = schubert(&["diagram", "123", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains('#'));
    let drawing = fs::read_to_string(&svg).unwrap();
    assert!(drawing.starts_with("<svg"));
    assert!(!drawing.contains("lightgray"));
    let out = schubert(&["diagram", "256341"]);
    assert_eq!(stdout(&out).matches('#').count(), 9);
    assert!(stdout(&out).contains("raj 11"));
}

#[test]
fn audit_trace_of_265143() {
    let out = schubert(&["audit", "265143", "--chain", "1,3;1,2;3,6;3,5;4,5;5,6"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let steps = json["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 7);
    assert_eq!(steps[0]["psi"], serde_json::json!([[1, 6], [4, 6]]));
    assert_eq!(steps[6]["psi"], serde_json::json!([]));
    assert_eq!(steps[6]["omega"].as_array().unwrap().len(), 2);
}
