//! End-to-end checks of the command-line interface: byte-determinism,
//! JSON reload round trips, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dadeglue")
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn build_enum_h1_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(&["group", "build", "--builtin", "xp3:3", "-o", "g.json"], d);
    // identical bytes on a second run
    run_ok(&["group", "build", "--builtin", "xp3:3", "-o", "g2.json"], d);
    assert_eq!(
        std::fs::read(d.join("g.json")).unwrap(),
        std::fs::read(d.join("g2.json")).unwrap()
    );
    // the emitted group file reloads
    run_ok(&["group", "build", "--from", "g.json", "-o", "g3.json"], d);
    assert_eq!(
        std::fs::read(d.join("g.json")).unwrap(),
        std::fs::read(d.join("g3.json")).unwrap()
    );
    let lattice = run_ok(&["lattice", "enum", "--group", "g.json"], d);
    let v: serde_json::Value = serde_json::from_str(&lattice).unwrap();
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 19);
    let h1 = run_ok(&["poset", "h1", "--group", "g.json", "--invariant"], d);
    assert!(h1.contains("H1 rank = 0, torsion = []"));
}

#[test]
fn coords_check_solve_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(&["group", "build", "--builtin", "ea:3:3", "-o", "g.json"], d);
    run_ok(
        &["dade", "random", "--group", "g.json", "--seed", "9", "-o", "e.json"],
        d,
    );
    run_ok(
        &["dade", "coords", "--group", "g.json", "--element", "e.json", "-o", "v.json"],
        d,
    );
    let check = run_ok(&["dade", "check", "--group", "g.json", "--vector", "v.json"], d);
    assert!(check.contains("\"pass\""));
    run_ok(
        &["dade", "solve", "--group", "g.json", "--vector", "v.json", "-o", "x.json"],
        d,
    );
    // the recovered element has the same coordinates
    run_ok(
        &["dade", "coords", "--group", "g.json", "--element", "x.json", "-o", "v2.json"],
        d,
    );
    assert_eq!(
        std::fs::read(d.join("v.json")).unwrap(),
        std::fs::read(d.join("v2.json")).unwrap()
    );
}

#[test]
fn failing_vector_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(&["group", "build", "--builtin", "xp3:3", "-o", "g.json"], d);
    run_ok(
        &["dade", "random", "--group", "g.json", "--seed", "1", "-o", "e.json"],
        d,
    );
    run_ok(
        &["dade", "coords", "--group", "g.json", "--element", "e.json", "-o", "v.json"],
        d,
    );
    // perturb one value to break the congruence
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("v.json")).unwrap()).unwrap();
    let val = v[0]["value"].as_i64().unwrap();
    v[0]["value"] = serde_json::json!(val + 1);
    std::fs::write(d.join("vbad.json"), serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["dade", "check", "--group", "g.json", "--vector", "vbad.json"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"fail\""));
    // unknown flags are usage errors
    let out = run(&["dade", "check", "--group", "g.json", "--nonsense"], d);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn glue_solve_zero_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(&["group", "build", "--builtin", "xp3:3", "-o", "g.json"], d);
    let group: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("g.json")).unwrap()).unwrap();
    let data = serde_json::json!({ "group": group, "entries": [] });
    std::fs::write(d.join("data.json"), serde_json::to_string(&data).unwrap()).unwrap();
    let verdict = run_ok(&["glue", "validate", "--data", "data.json"], d);
    assert!(verdict.contains("\"pass\""));
    let outcome = run_ok(&["glue", "solve", "--data", "data.json"], d);
    let v: serde_json::Value = serde_json::from_str(&outcome).unwrap();
    assert_eq!(v["status"], "Glueable");
    assert_eq!(v["certificate"].as_array().unwrap().len(), 0);
    let cocycle = run_ok(&["glue", "cocycle", "--data", "data.json"], d);
    assert_eq!(cocycle.trim(), "[]");
}

#[test]
fn xp5_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = run_ok(&["report", "xp5", "--p", "3", "-o", "r.json"], d);
    assert!(text.contains("invariant H1"));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(r["e"], 40);
    assert_eq!(r["h1_invariant_rank"], 81);
    let out = run(&["report", "xp5", "--p", "7"], d);
    assert_eq!(out.status.code(), Some(1));
}
