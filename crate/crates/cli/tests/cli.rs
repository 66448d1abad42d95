use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn latwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latwalk")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_model(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn counts_simple_walks_as_csv() {
    let o = latwalk(&["count", "--model", "simple", "--n", "6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let counts: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(counts, ["1", "2", "6", "18", "60", "200", "700"]);
}

#[test]
fn counts_returns_to_origin() {
    let o = latwalk(&["count", "--model", "N,S,E,W", "--n", "6", "--endpoint", "origin"]);
    let v = json(&o);
    assert_eq!(v["counts"], serde_json::json!(["1", "0", "2", "0", "10", "0", "70"]));
}

#[test]
fn reads_weighted_model_documents() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(
        dir.path(),
        "lazy.json",
        r#"{"dimension": 2, "steps": [{"vector": "N"}, {"vector": [0, -1], "weight": "3/2"}, {"vector": "E", "weight": "0.5"}, {"vector": "W", "weight": "1/2"}]}"#,
    );
    let o = latwalk(&["count", "--model", &file, "--n", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // n = 2: NN, NS, NE, EN, EE, EW with weights 1, 3/2, 1/2, 1/2, 1/4, 1/4.
    assert_eq!(json(&o)["counts"], serde_json::json!(["1", "3/2", "4"]));
}

#[test]
fn diagonal_agrees_with_counts() {
    let o = latwalk(&["diagonal", "--model", "N,SE,SW", "--n", "10", "--endpoint", "axes=1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["matches"], Value::Bool(true));
}

#[test]
fn orbit_sum_of_a_symmetric_model() {
    let o = latwalk(&["orbitsum", "--model", "N,SE,S,SW"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["group"].as_array().unwrap().len(), 4);
    assert_eq!(v["product_form_agrees"], Value::Bool(true));
}

#[test]
fn critical_points_of_a_negative_drift_model() {
    let o = latwalk(&["critical", "--model", "N,SE,S,SW"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rates: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["rate_exact"].as_str().unwrap()).collect();
    assert_eq!(rates, ["2*sqrt(3)", "-2*sqrt(3)"]);
}

#[test]
fn asymptotics_with_alternating_constants() {
    let o = latwalk(&["asympt", "--model", "N,SE,S,SW", "--precision-bits", "256"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let p = &v["engine"]["periodic"];
    assert_eq!(p["period"], 2);
    assert_eq!(p["alpha"], "-2");
    let c: Vec<f64> = p["constants"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect();
    let pi = std::f64::consts::PI;
    assert!((c[0] / (12.0 * 3f64.sqrt() / pi) - 1.0).abs() < 1e-12);
    assert!((c[1] / (18.0 / pi) - 1.0).abs() < 1e-12);
    assert_eq!(v["routes_agree"], Value::Bool(true));
}

#[test]
fn verification_passes_for_a_covered_model() {
    let o = latwalk(&["verify", "--model", "N,SE,S,SW"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn algebraic_model_is_verified_empirically_only() {
    let o = latwalk(&["verify", "--model", "N,W,SE"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["status"], "partial");
    assert!((v["empirical"]["alpha"].as_f64().unwrap() + 1.5).abs() < 0.05);
}

#[test]
fn zero_drift_weighted_model_is_partial() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(
        dir.path(),
        "balanced.json",
        r#"{"dimension": 2, "steps": [
            {"vector": "E"}, {"vector": "W"}, {"vector": "NE"}, {"vector": "NW"},
            {"vector": "N", "weight": "2"}, {"vector": "SE", "weight": "2"}, {"vector": "SW", "weight": "2"}]}"#,
    );
    let o = latwalk(&["verify", "--model", &file, "--n", "256"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    let messages = v["messages"].to_string();
    assert!(messages.contains("conjectural"), "{messages}");
    assert!(v["empirical"].is_object());
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(code(&latwalk(&["count", "--model", "no-such-model"])), 3);
    assert_eq!(code(&latwalk(&["count"])), 3);
    assert_eq!(code(&latwalk(&["count", "--model", "simple", "--endpoint", "axes=3"])), 3);
    assert_eq!(code(&latwalk(&["count", "--model", "simple", "--endpoint", "edge"])), 3);
    assert_eq!(code(&latwalk(&["frobnicate"])), 3);
    assert_eq!(code(&latwalk(&["verify", "--model", "simple", "--n", "10"])), 3);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let a = latwalk(&["verify", "--model", "king", "--n", "128", "--threads", "1"]);
    let b = latwalk(&["verify", "--model", "king", "--n", "128", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let a = latwalk(&["count", "--model", "cube-negative", "--n", "12", "--threads", "1"]);
    let b = latwalk(&["count", "--model", "cube-negative", "--n", "12", "--threads", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = latwalk(&["count", "--model", "gessel", "--n", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "count");
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);
}

#[test]
fn catalog_lists_and_reproduces() {
    let o = latwalk(&["catalog"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["entries"].as_array().unwrap().len(), 23);

    let o = latwalk(&["catalog", "--check", "--format", "md"]);
    assert_eq!(code(&o), 0);
    let md = String::from_utf8(o.stdout).unwrap();
    assert!(md.contains("## Walks anywhere") && md.contains("## Returns to the boundary"));
    assert!(md.contains("0 failed"));
}

#[test]
fn every_json_report_is_versioned() {
    for cmd in ["count", "diagonal", "orbitsum", "critical", "asympt"] {
        let v = json(&latwalk(&[cmd, "--model", "NE,NW,S", "--n", "8"]));
        assert_eq!(v["schema_version"], 1, "{cmd}");
        assert_eq!(v["command"], cmd);
    }
}
