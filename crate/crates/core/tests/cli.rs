//! End-to-end runs of the `clocklat` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clocklat"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_trefoil_prints_counts() {
    let o = run(&["validate", corpus("trefoil").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["V_int=3", "F=5", "stars=2"] {
        assert!(out.lines().any(|l| l == line), "missing {line} in {out}");
    }
}

#[test]
fn invalid_star_count_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus("trefoil")).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
    file["starred"] = serde_json::json!([]);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, file.to_string()).unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("StarCountMismatch"));
}

#[test]
fn unframed_counterexample_reports_cycle() {
    let f = corpus("framing_counterexample");
    let o = run(&["lattice-planar", "--verify", "--no-framing", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CycleDetected"));
    let framed = run(&["lattice-planar", "--verify", f.to_str().unwrap()]);
    assert_eq!(framed.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["states", "--no-such-flag", "x"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("torus");
    let mut texts = Vec::new();
    for k in 0..2 {
        let json = dir.path().join(format!("g{k}.json"));
        let dot = dir.path().join(format!("d{k}"));
        let o = run(&[
            "lattice-genus",
            "--verify",
            "--json",
            json.to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
            f.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let class0 = std::fs::read_to_string(dot.join("class0.dot")).unwrap();
        texts.push((stdout(&o), std::fs::read_to_string(json).unwrap(), class0));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn counts_states_and_summarizes_spine() {
    let f = corpus("hasse_example2");
    let o = run(&["states", "--count-only", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "15");
    let o = run(&["spine", f.to_str().unwrap()]);
    assert!(stdout(&o).contains("matchings=15"));
    let o = run(&["spine", "--export", "dot", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("graph spine {"));
}

#[test]
fn export_round_trips() {
    let f = corpus("multiverse_right");
    let o = run(&["export", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), std::fs::read_to_string(&f).unwrap());
}

#[test]
fn check_runs_one_criterion() {
    let o = run(&["check", "--only", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS 10"));
}
