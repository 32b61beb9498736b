use std::path::PathBuf;
use std::process::{Command, Output};

fn mompoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mompoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_file(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("mompoly-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn count_single_dilation() {
    let out = mompoly(&["count", "--group", "u", "-k", "2", "-q", "1", "-N", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "20");
}

#[test]
fn count_strict_unique_pattern() {
    let out = mompoly(&["count", "--group", "u", "-k", "2", "-q", "1", "-N", "4", "--strict"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn count_table_csv() {
    let out = mompoly(&[
        "count", "--group", "u", "-k", "2", "-q", "1", "--n-max", "5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(
        lines,
        vec!["N,count", "0,1", "1,4", "2,10", "3,20", "4,35", "5,56"]
    );
}

#[test]
fn count_engines_agree() {
    for engine in ["naive", "dp", "both"] {
        let out = mompoly(&[
            "count", "--group", "sp", "-k", "1", "-q", "1", "-N", "2", "--engine", engine,
        ]);
        assert!(out.status.success(), "{engine}");
        assert_eq!(stdout(&out).trim(), "6", "{engine}");
    }
}

#[test]
fn fit_u21_json() {
    let out = mompoly(&["fit", "--group", "u", "-k", "2", "-q", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degree"], 3);
    assert_eq!(
        v["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect::<Vec<_>>(),
        vec!["1/1", "11/6", "1/1", "1/6"]
    );
    assert_eq!(v["polynomiality"]["pass"], true);
}

#[test]
fn verify_roots_and_bijection() {
    let out = mompoly(&["verify", "roots", "--group", "u", "-k", "2", "-q", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["pass"], true);
    assert_eq!(v[0]["detail"]["expected_roots"], "-1..=-3");

    let out = mompoly(&["verify", "bijection", "--group", "u", "-k", "2", "-q", "1", "-N", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["detail"]["lax_count"], "10");
    assert_eq!(v[0]["detail"]["strict_count"], "10");
}

#[test]
fn verify_all_aggregates() {
    let out = mompoly(&["verify", "all", "--group", "sp", "-k", "1", "-q", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let claims: Vec<&str> =
        v.as_array().unwrap().iter().map(|r| r["claim"].as_str().unwrap()).collect();
    assert_eq!(
        claims,
        vec!["polynomiality", "integer_roots", "symmetry", "reciprocity", "bijectivity"]
    );
}

#[test]
fn reference_reports_absent_golden() {
    let out = mompoly(&["reference", "--group", "u", "-k", "2", "-q", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["golden"], false);
}

#[test]
fn reference_keating_snaith_for_k1() {
    let out = mompoly(&["reference", "--group", "u", "-k", "1", "-q", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["keating_snaith"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    let out = mompoly(&["count", "--group", "x", "-k", "1", "-q", "1", "-N", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // missing both -N and --n-max
    let out = mompoly(&["count", "--group", "u", "-k", "1", "-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // csv is count-table-only
    let out = mompoly(&["fit", "--group", "u", "-k", "1", "-q", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = mompoly(&[
        "count", "--group", "u", "-k", "2", "-q", "2", "-N", "6", "--engine", "naive",
        "--budget-nodes", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cache_round_trip_and_poisoned_cache_detection() {
    let path = temp_file("cache");
    let _ = std::fs::remove_file(&path);
    let cache = path.to_str().unwrap();
    let out = mompoly(&[
        "count", "--group", "u", "-k", "2", "-q", "1", "--n-max", "3", "--cache", cache,
    ]);
    assert!(out.status.success());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.starts_with("#mompoly-cache v1 engine="));
    assert!(contents.contains("u,2,1,3,0,20"));

    // second run is served from the cache and prints the same table
    let out2 = mompoly(&[
        "count", "--group", "u", "-k", "2", "-q", "1", "--n-max", "3", "--cache", cache,
    ]);
    assert!(out2.status.success());
    assert_eq!(stdout(&out), stdout(&out2));

    // a poisoned entry is caught by the cross-checking engine
    let poisoned = contents.replace("u,2,1,3,0,20", "u,2,1,3,0,99");
    std::fs::write(&path, poisoned).unwrap();
    let out3 = mompoly(&[
        "count", "--group", "u", "-k", "2", "-q", "1", "-N", "3", "--cache", cache,
        "--engine", "both",
    ]);
    assert_eq!(out3.status.code(), Some(1));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn env_var_sets_cache_path() {
    let path = temp_file("env-cache");
    let _ = std::fs::remove_file(&path);
    let out = Command::new(env!("CARGO_BIN_EXE_mompoly"))
        .args(["count", "--group", "sp", "-k", "1", "-q", "1", "-N", "1"])
        .env("MOMPOLY_CACHE", &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.contains("sp,1,1,1,0,3"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_vertex_witnesses() {
    let out = mompoly(&["verify", "vertex", "--group", "u", "-k", "2", "-q", "1"]);
    assert!(out.status.success());
    // k = 1 has no witness construction: usage error
    let out = mompoly(&["verify", "vertex", "--group", "sp", "-k", "1", "-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
