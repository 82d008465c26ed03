use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heunkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heunkit")).args(args).env_remove("HEUNKIT_SEED").output().unwrap()
}

fn read_report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_meta(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("meta");
    v
}

#[test]
fn default_plan_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = heunkit(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_report(&path);
    assert_eq!(v["tool"], "heunkit");
    assert_eq!(v["plan"]["draws_per_rule"], 20);
    assert_eq!(v["suites"].as_array().unwrap().len(), 13);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["meta"]["wall_time_seconds"].is_number());
}

#[test]
fn zero_tolerance_fails() {
    let out = heunkit(&["verify", "--suite", "gauss", "--draws", "2", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn same_seed_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&p1, &p2] {
        assert_eq!(
            heunkit(&["verify", "--seed", "11", "--draws", "3", "--report", p.to_str().unwrap()]).status.code(),
            Some(0)
        );
    }
    assert_eq!(without_meta(read_report(&p1)), without_meta(read_report(&p2)));
    let p3 = dir.path().join("c.json");
    heunkit(&["verify", "--seed", "12", "--draws", "3", "--report", p3.to_str().unwrap()]);
    assert_ne!(without_meta(read_report(&p1)), without_meta(read_report(&p3)));
}

#[test]
fn summary_matches_cases() {
    let out = heunkit(&["verify", "--suite", "heun-group", "--draws", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let cases = v["suites"][0]["cases"].as_array().unwrap();
    let passed = cases.iter().filter(|c| c["verdict"] == "pass").count();
    assert_eq!(v["summary"]["total"], cases.len());
    assert_eq!(v["summary"]["passed"], passed);
    // 24 rules x 2 draws, 6 Mobius rules x 50 Qbar draws, 2 structural checks
    assert_eq!(cases.len(), 24 * 2 + 6 * 50 + 2);
    for c in cases {
        let tol = c["tolerance"].as_f64().unwrap();
        let res = c["residual"].as_f64().unwrap();
        assert_eq!(c["verdict"] == "pass", res <= tol);
    }
}

#[test]
fn residuals_carry_17_significant_digits() {
    let out = heunkit(&["verify", "--suite", "h-dup", "--draws", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"residual\"")).unwrap();
    let num = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = num.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 17, "{num}");
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("heunkit.toml");
    std::fs::write(&cfg, "seed = 5\ndraws = 1\nsuite = \"h-dup\"\n").unwrap();
    let run = |extra: &[&str], env: Option<&str>| -> Value {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_heunkit"));
        cmd.arg("verify").args(extra).env_remove("HEUNKIT_SEED");
        if let Some(s) = env {
            cmd.env("HEUNKIT_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    };
    let c = cfg.to_str().unwrap();
    assert_eq!(run(&["--config", c], Some("9"))["plan"]["seed"], 5);
    assert_eq!(run(&["--config", c, "--seed", "3"], Some("9"))["plan"]["seed"], 3);
    assert_eq!(run(&["--suite", "h-dup", "--draws", "1"], Some("9"))["plan"]["seed"], 9);
    assert_eq!(run(&["--suite", "h-dup", "--draws", "1"], None)["plan"]["seed"], 0);
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(heunkit(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(heunkit(&["verify", "--draws", "many"]).status.code(), Some(2));
    assert_eq!(heunkit(&["verify", "--explain", "[1+b+]"]).status.code(), Some(2));
    assert_eq!(heunkit(&["verify", "--config", "/nonexistent/heunkit.toml"]).status.code(), Some(2));
    assert_eq!(heunkit(&[]).status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_heunkit"))
        .args(["verify", "--suite", "h-dup"])
        .env("HEUNKIT_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn catalogs() {
    let out = heunkit(&["verify", "--list-rules", "heun"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 24);
    let out = heunkit(&["verify", "--list-rules", "gauss"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[1-][inf-]  euler"), "{text}");
    let out = heunkit(&["verify", "--explain", "[1+a+][inf+]"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("swap-1-a") && text.contains("P-symbol"), "{text}");
}
