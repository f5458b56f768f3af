use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn nlg(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nlg")).args(args).output().expect("runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stdout)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn export(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let mut args = vec!["catalog", "export", name];
    args.extend_from_slice(extra);
    let (code, _, text) = nlg(&args);
    assert_eq!(code, 0);
    write(dir, &format!("{name}{}.json", extra.len()), &text)
}

#[test]
fn value_of_a3() {
    let dir = TempDir::new().unwrap();
    let a3 = export(&dir, "a3", &[]);
    let (code, report, _) = nlg(&["value", s(&a3), "--model", "ns"]);
    assert_eq!(code, 0);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["command"], "value");
    assert_eq!(report["result"]["value"], "2/3");
    assert_eq!(report["input"]["sha256"].as_str().unwrap().len(), 64);
    let (_, report, _) = nlg(&["value", s(&a3), "--model", "snos"]);
    assert_eq!(report["result"]["value"], "1/1");
    let (_, report, _) = nlg(&["value", s(&a3), "--model", "classical"]);
    assert_eq!(report["result"]["value"], "2/3");
}

#[test]
fn repeated_and_threshold_values() {
    let dir = TempDir::new().unwrap();
    let chsh = export(&dir, "chsh", &[]);
    let (code, report, _) = nlg(&["value", s(&chsh), "--model", "classical", "--repeat", "2", "--threshold", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["threshold"], 1);
    let (code, report, _) = nlg(&["value", s(&chsh), "--model", "ns", "--repeat", "2", "--witness"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["value"], "1/1");
    assert_eq!(report["result"]["strategy"]["densities"].as_array().unwrap().len(), 256);
    let (code, _, _) = nlg(&["value", s(&chsh), "--model", "ns", "--threshold", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let a3 = export(&dir, "a3", &[]);
    let first = nlg(&["value", s(&a3), "--model", "ns"]).2;
    let second = nlg(&["value", s(&a3), "--model", "ns"]).2;
    assert_eq!(first, second);
    let (_, timed, _) = nlg(&["value", s(&a3), "--model", "ns", "--timing"]);
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn zero_density_membership() {
    let dir = TempDir::new().unwrap();
    let zero = write(
        &dir,
        "zero.json",
        r#"{"players": 2, "inputs": [2, 2], "outputs": [2, 2], "densities": ["0","0","0","0","0","0","0","0","0","0","0","0","0","0","0","0"]}"#,
    );
    let (code, report, _) = nlg(&["membership", s(&zero), "--set", "snos"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["member"], true);
    let (code, report, _) = nlg(&["membership", s(&zero), "--set", "ns", "--mode", "all"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["member"], false);
    assert_eq!(report["result"]["violation"]["kind"], "normalization");
}

#[test]
fn frustrated_strategy_membership_and_bumpup() {
    let dir = TempDir::new().unwrap();
    let frustrated = export(&dir, "a3", &["--strategy", "frustrated"]);
    let (_, report, _) = nlg(&["membership", s(&frustrated), "--set", "snos"]);
    assert_eq!(report["result"]["member"], true);
    let (_, report, _) = nlg(&["membership", s(&frustrated), "--set", "ns"]);
    assert_eq!(report["result"]["member"], false);
    let (code, report, _) = nlg(&["bumpup", s(&frustrated)]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "unsupported");

    let pr = export(&dir, "chsh", &["--strategy", "pr-box"]);
    let (code, report, _) = nlg(&["bumpup", s(&pr)]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["is_ns"], true);
    assert_eq!(report["result"]["dominates_input"], true);
}

#[test]
fn bound_example() {
    let (code, report, _) = nlg(&["bound", "--name", "thm1-rep", "--params", "l=3,delta=0.5,n=4"]);
    assert_eq!(code, 0);
    let expected = (1.0 - 0.25 / 845.0f64).powi(4);
    let got = report["result"]["bound"].as_f64().unwrap();
    assert!((got - expected).abs() < 1e-11);
    let (code, report, _) = nlg(&["bound", "--name", "prefactor", "--params", "kind=snos,outputs=2,inputs=2,n=1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["exponent"], "56");
    let (code, _, _) = nlg(&["bound", "--name", "thm1-rep", "--params", "l=3,delta=2,n=4"]);
    assert_eq!(code, 2);
    let (code, _, _) = nlg(&["bound", "--name", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_sandwich() {
    let dir = TempDir::new().unwrap();
    let a3 = export(&dir, "a3", &[]);
    let (code, report, _) = nlg(&["verify", s(&a3), "--n", "2", "--model", "snos"]);
    assert_eq!(code, 0);
    assert_eq!(report["pass"], true);
    assert_eq!(report["result"]["repeated"], "1/1");
    let chsh = export(&dir, "chsh", &[]);
    let (code, report, _) = nlg(&["verify", s(&chsh), "--n", "2", "--model", "ns", "--gamma", "0"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["bounds"].as_array().unwrap().len(), 2);
}

#[test]
fn resource_cap_exit_code() {
    let dir = TempDir::new().unwrap();
    let chsh = export(&dir, "chsh", &[]);
    let (code, report, _) = nlg(&["value", s(&chsh), "--model", "ns", "--repeat", "3", "--max-table-entries", "100"]);
    assert_eq!(code, 3);
    assert_eq!(report["error"]["kind"], "resource");
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\n  \"players\": 2,\n  \"inputs\": [2, 2\n}");
    let out = Command::new(env!("CARGO_BIN_EXE_nlg")).args(["value", s(&bad), "--model", "ns"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 4"), "{stderr}");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["error"]["line"], 4);
}

#[test]
fn reconstruct_two_player_joint() {
    let dir = TempDir::new().unwrap();
    let inputs = write(
        &dir,
        "inputs.json",
        r#"{"players": 2, "inputs": [1, 2], "outputs": [2, 2],
            "target": ["1/2", "1/2"],
            "joint": ["1/4", "0", "0", "1/4", "1/8", "1/8", "0", "1/4"]}"#,
    );
    let (code, report, _) = nlg(&["reconstruct", s(&inputs)]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["pass"], true);
    assert_eq!(report["result"]["is_ns"], true);
}

#[test]
fn catalog_listing() {
    let (code, report, _) = nlg(&["catalog", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = report["result"]["games"].as_array().unwrap().iter().map(|g| g["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["a3", "chsh", "trivial"]);
    let (code, _, _) = nlg(&["catalog", "export", "missing"]);
    assert_eq!(code, 2);
}
