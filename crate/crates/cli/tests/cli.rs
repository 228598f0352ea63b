use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_semihilbert")).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn instance(dir: &Path, name: &str, body: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const IDENTITY_A: &str = r#"{"dim": 2, "A": [[[1,0],[0,0]],[[0,0],[1,0]]], "seed": 4, "operators": {
    "N": [[[0,0],[1,0]],[[0,0],[0,0]]],
    "I": [[[1,0],[0,0]],[[0,0],[1,0]]],
    "H": [[[2,0],[0,1]],[[0,-1],[-1,0]]]}}"#;

#[test]
fn compute_on_the_elementary_nilpotent() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    let (code, out, _) = run(&["compute", &p, "N"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["omega"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert!((v["seminorm"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(v["classes"]["a_normal"], false);
    assert!(v["error_bounds"]["omega"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn hermitian_operator_over_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    let v: Value = serde_json::from_str(&run(&["compute", &p, "H"]).1).unwrap();
    // eigenvalues of [[2, i], [-i, -1]] are (1 ± √13)/2
    let top = (1.0 + 13f64.sqrt()) / 2.0;
    assert!((v["seminorm"].as_f64().unwrap() - top).abs() < 1e-10);
    assert!((v["omega"].as_f64().unwrap() - top).abs() < 1e-9);
    assert!(v["crawford"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["classes"]["a_selfadjoint"], true);
    assert_eq!(v["classes"]["a_positive"], false);
}

#[test]
fn adjoint_over_identity_is_the_conjugate_transpose() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    let v: Value = serde_json::from_str(&run(&["adjoint", &p, "N"]).1).unwrap();
    assert_eq!(v["exists"], true);
    let m = &v["adjoint"];
    assert_eq!(m[1][0][0], 1.0);
    assert_eq!(m[0][1][0], 0.0);
}

#[test]
fn range_of_identity_and_nilpotent() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    let (code, out, _) = run(&["range", &p, "I", "--points", "12"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("theta,re,im"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| (r[1] - 1.0).abs() < 1e-12 && r[2].abs() < 1e-12));

    let svg_path = dir.path().join("n.svg");
    let (code, out, _) = run(&["range", &p, "N", "--format", "svg", "--out", svg_path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let svg = std::fs::read_to_string(svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polygon") && svg.contains("<circle"));
    assert!(svg.trim_end().ends_with("</svg>"));

    assert_eq!(run(&["range", &p, "N", "--points", "7"]).0, 2);
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let md = dir.path().join("r.md");
    let (code, stdout, _) = run(&[
        "verify",
        "--checks",
        "feki1_lo,feki1_hi",
        "--trials",
        "500",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
        "--md",
        md.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["meta"]["total_trials"], 1000);
    assert_eq!(std::fs::read_to_string(&md).unwrap(), stdout);
    // only the two reports remain: temporaries were renamed into place
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);

    let (code, _, err) = run(&["verify", "--checks", "nonexistent"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonexistent"));
    assert_eq!(run(&["verify", "--trials", "0"]).0, 2);
    assert_eq!(run(&["verify", "--dims", "0"]).0, 2);
    assert_eq!(run(&["verify", "--ranks", "most"]).0, 2);
}

#[test]
fn verify_lists_the_registry() {
    let (code, out, _) = run(&["verify", "--list"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 35);
    assert!(out.lines().any(|l| l.starts_with("hook02000")));
}

#[test]
fn sharpness_passes() {
    let (code, out, _) = run(&["sharpness"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 5);
    assert_eq!(v["pass"], true);
}

#[test]
fn oracle_on_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    let (code, out, _) = run(&["oracle", &p, "I", "--samples", "100"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["oracle"]["omega_lb"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["pass"], true);
    let (_, out2, _) = run(&["oracle", &p, "I", "--samples", "100", "--seed", "5"]);
    assert!(out2.contains("\"seed\": 5"));
}

#[test]
fn bad_input_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = instance(dir.path(), "r.json", r#"{"dim": 2, "A": [[[1,0]],[[0,0],[1,0]]], "operators": {}}"#);
    let (code, _, err) = run(&["compute", &ragged, "T"]);
    assert_eq!(code, 2);
    assert!(err.contains("row 0"), "{err}");
    let not_psd = instance(
        dir.path(),
        "n.json",
        r#"{"dim": 1, "A": [[[-1,0]]], "operators": {"T": [[[1,0]]]}}"#,
    );
    assert_eq!(run(&["compute", &not_psd, "T"]).0, 2);
    let p = instance(dir.path(), "i.json", IDENTITY_A);
    assert_eq!(run(&["compute", &p, "missing"]).0, 2);
    assert_eq!(run(&["compute", "/nonexistent/file.json", "T"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--grid-n", "3", "sharpness"]).0, 2);
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_semihilbert"))
        .args(["verify", "--checks", "refine1", "--trials", "4"])
        .env("SEMIHILBERT_THREADS", "two")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let capped = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_semihilbert"))
            .args(["verify", "--checks", "refine1,apower", "--trials", "26"])
            .env("SEMIHILBERT_THREADS", n)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(capped("1"), capped("3"));
}
