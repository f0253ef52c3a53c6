use std::path::Path;
use std::process::{Command, Output};

use canonical24::branch::fixtures;

const BIN: &str = env!("CARGO_BIN_EXE_canonical24");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn sampled(dir: &Path) -> String {
    let out = run(dir, &["sample", "--seed", "1", "-o", "cfg.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    "cfg.json".into()
}

#[test]
fn exhaustion_prints_a_histogram_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sample", "--seed", "1", "--coeff-bound", "1", "--max-tries", "1", "-o", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("smooth_D1"));
    assert!(!dir.path().join("x.json").exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn argument_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sampled(dir.path());
    for args in [
        vec!["probe", cfg.as_str(), "--samples", "0"],
        vec!["probe", cfg.as_str(), "--pairs", "0"],
        vec!["sample", "--max-tries", "0"],
        vec!["sample", "--coeff-bound", "0"],
        vec!["verify", "missing.json"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(dir.path(), &args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn malformed_configs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sampled(dir.path());
    let text = std::fs::read_to_string(dir.path().join(&cfg)).unwrap();
    std::fs::write(dir.path().join("trunc.json"), &text[..text.len() / 2]).unwrap();
    let out = run(dir.path(), &["verify", "trunc.json"]);
    assert_eq!(out.status.code(), Some(1));

    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["config"]["delta3"]["bidegree"] = serde_json::json!([2, 3]);
    std::fs::write(dir.path().join("bad.json"), doc.to_string()).unwrap();
    let out = run(dir.path(), &["verify", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("config.delta3"), "{}", stderr(&out));
}

#[test]
fn verify_accepts_bare_and_wrapped_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sampled(dir.path());
    assert_eq!(run(dir.path(), &["verify", &cfg, "--report", "v.json"]).status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(doc["format"], "canonical24/v1");
    assert_eq!(doc["manifest"]["command"], "verify");
    std::fs::write(dir.path().join("bare.json"), doc["config"].to_string()).unwrap();
    assert_eq!(run(dir.path(), &["verify", "bare.json"]).status.code(), Some(0));
}

#[test]
fn ring_refuses_uncertified_configs() {
    let dir = tempfile::tempdir().unwrap();
    let c = fixtures::planted_equal_v(1).unwrap();
    std::fs::write(dir.path().join("eq.json"), serde_json::to_string(&c).unwrap()).unwrap();
    let out = run(dir.path(), &["ring", "eq.json", "--max-degree", "2", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn ring_at_degree_three_reports_the_relations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sampled(dir.path());
    let out = run(dir.path(), &["ring", &cfg, "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["relations_deg3"]["kernel_dim"], 43);
    assert_eq!(doc["golden"]["pass"], true);
}

#[test]
fn numerology_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["numerology"]);
    let b = run(dir.path(), &["numerology"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for key in ["K2=24", "pg=6", "expected_moduli_dim=22", "family_dim=31", "moduli_dim=25"] {
        assert!(text.lines().any(|l| l == key), "{key}");
    }
}

#[test]
fn probe_output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sampled(dir.path());
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = Command::new(BIN)
            .args(["probe", &cfg, "--samples", "60", "--pairs", "100"])
            .env("CANONICAL24_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
    let bad = Command::new(BIN)
        .args(["numerology"])
        .env("CANONICAL24_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
