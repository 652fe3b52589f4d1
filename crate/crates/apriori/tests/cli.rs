//! Exit codes and outputs of the `apriori` binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apriori"))
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("apriori-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn code(c: &mut Command) -> i32 {
    c.output().unwrap().status.code().unwrap()
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(code(bin().args(["enumerate-orbits", "--q", "3", "--b", "3"])), 3);
    assert_eq!(code(bin().args(["elephant", "--q", "1", "--b", "0"])), 3);
    assert_eq!(code(bin().args(["elephant", "--q", "4", "--b", "2", "--blocks", "3"])), 3);
    assert_eq!(code(bin().args(["pants", "--lengths", "1,-2,3"])), 3);
    assert_eq!(code(bin().args(["pants", "--lengths", "1,2"])), 3);
    assert_eq!(code(bin().args(["--resolution", "3", "width"])), 3);
    assert_eq!(code(bin().args(["no-such-command"])), 3);
    assert_eq!(code(bin().args(["verify", "--suite", "nope"])), 3);
    assert_eq!(code(bin().args(["--config", "/nonexistent/config.json", "width"])), 3);
}

#[test]
fn check_failures_exit_2() {
    let out = scratch("check");
    // The f^p bound over every edge fails once b ≥ 1.
    let o = bin().args(["elephant", "--q", "3", "--b", "1", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree"]["pass"], false);
    assert_eq!(v["proof_steps_hold"], true);
    // The translation region passes.
    let c = code(bin().args(["elephant", "--q", "3", "--b", "1", "--scope", "translation", "--out"]).arg(&out));
    assert_eq!(c, 0);
    assert!(out.join("hubbard_q3_b1.csv").exists());
}

#[test]
fn width_of_a_json_quadrilateral() {
    let dir = scratch("width");
    let f = dir.join("quad.json");
    std::fs::write(&f, r#"{"I": [0.0, 0.25], "J": [0.5, 0.75]}"#).unwrap();
    let o = bin().args(["--resolution", "64", "width", "--input"]).arg(&f).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["exact"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["capacity"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    std::fs::write(&f, r#"{"I": [0.0, 0.5], "J": [0.25, 0.75]}"#).unwrap();
    assert_eq!(code(bin().args(["width", "--input"]).arg(&f)), 3);
}

#[test]
fn orbits_are_written_as_json() {
    let out = scratch("orbits");
    assert_eq!(code(bin().args(["enumerate-orbits", "--q", "4", "--b", "2", "--out"]).arg(&out)), 0);
    let text = std::fs::read_to_string(out.join("orbits_q4_b2.json")).unwrap();
    let records: Vec<apriori::pullback::OrbitRecord> = serde_json::from_str(&text).unwrap();
    assert_eq!(records.len(), 4);
    for r in records {
        assert_eq!(r.p, 6);
        r.orbit().unwrap();
    }
}

#[test]
fn pants_report_and_config_override() {
    let dir = scratch("pants");
    let o = bin().args(["pants", "--lengths", "2,2,2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["diagram_size"], 0);
    // Flags override the config file: the config's bad resolution is replaced.
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"resolution": 64, "seed": 5}"#).unwrap();
    assert_eq!(code(bin().arg("--config").arg(&cfg).args(["width", "--count", "2"])), 0);
    std::fs::write(&cfg, r#"{"resolution": 5}"#).unwrap();
    assert_eq!(code(bin().arg("--config").arg(&cfg).args(["width", "--count", "1"])), 3);
}

#[test]
fn verify_writes_reports() {
    let out = scratch("verify");
    let o = bin().args(["verify", "--suite", "fuchsian", "--smoke", "--seed", "3", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().starts_with("8,pants thin-thick,true"));
    let rows = std::fs::read_to_string(out.join("criterion_08_pants_thin_thick.csv")).unwrap();
    assert_eq!(rows.lines().count(), 5);
    assert!(rows.lines().nth(1).unwrap().starts_with("3,0,"));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["seed"], 3);
    // Elephant smoke run is red in the expected way.
    let c = code(bin().args(["verify", "--suite", "elephant", "--smoke", "--out"]).arg(&out));
    assert_eq!(c, 2);
}
