use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crossed-spectrum"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn analyze_json_is_deterministic() {
    let path = scenario("d4_t2.json");
    let a = run(&["analyze", "--scenario", path.to_str().unwrap(), "--format", "json"]);
    let b = bin()
        .env("CROSSED_SPECTRUM_THREADS", "1")
        .args(["analyze", "--scenario", path.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["is_fell"], false);
    assert_eq!(v["non_fell_points"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_output_file_matches_stdout() {
    let out = tmp("s3_report.json");
    let path = scenario("s3_r3.json");
    let r =
        run(&["analyze", "--scenario", path.to_str().unwrap(), "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), r.stdout);
}

#[test]
fn table_format_lists_the_verdict() {
    let path = scenario("z2_torus.json");
    let r = run(&["analyze", "--scenario", path.to_str().unwrap(), "--format", "table"]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("generic"));
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_err());
}

#[test]
fn verify_passes_on_bundled_scenarios() {
    for name in ["s3_r3.json", "d4_t2.json", "z2_torus.json", "s3_abstract.json"] {
        let path = scenario(name);
        let r = run(&["verify", "--scenario", path.to_str().unwrap(), "--trials", "5", "--format", "json"]);
        assert_eq!(r.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&r.stderr));
        let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn impossible_tolerance_reports_a_violation() {
    let path = scenario("s3_r3.json");
    let r =
        run(&["verify-trace", "--scenario", path.to_str().unwrap(), "--trials", "2", "--tol", "0", "--format", "json"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("failed"));
}

#[test]
fn branch_single_and_sweep() {
    let r = run(&["branch", "--n", "5", "--weight", "1,1", "--format", "json"]);
    assert_eq!(r.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v[0]["dimension"], 10);
    assert_eq!(v[0]["passed"], true);

    let r = run(&["branch", "--n", "4", "--weight", "2,-1", "--format", "table"]);
    assert_eq!(r.status.code(), Some(0));

    let r = run(&["branch", "--sweep", "--format", "json"]);
    assert_eq!(r.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 60);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["analyze", "--scenario", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(run(&["branch", "--n", "5", "--weight", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let bad = tmp("bad_version.json");
    let text = std::fs::read_to_string(scenario("s3_r3.json")).unwrap().replacen("\"version\": 1", "\"version\": 2", 1);
    std::fs::write(&bad, text).unwrap();
    let r = run(&["analyze", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("version"));

    let path = scenario("s3_r3.json");
    let r = bin()
        .env("CROSSED_SPECTRUM_THREADS", "zero")
        .args(["analyze", "--scenario", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn wrong_supplied_table_is_rejected() {
    let bad = tmp("bad_table.json");
    let text = std::fs::read_to_string(scenario("s3_r3.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["character_table"]["rows"][2] = serde_json::json!([2, 1, -1]);
    std::fs::write(&bad, v.to_string()).unwrap();
    let r = run(&["analyze", "--scenario", bad.to_str().unwrap()]);
    assert_ne!(r.status.code(), Some(0));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
