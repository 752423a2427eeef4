//! End-to-end tests of the etaq binary: flag grammar, output formats, exit
//! codes, cache behavior, and the determinism contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_etaq"));
    assert!(p.exists(), "binary not built at {}", p.display());
    p = p.canonicalize().unwrap();
    p
}

fn run_in(dir: &std::path::Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn etaq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn expand_two_core_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "expand",
            "--eta",
            "2^2 * 1^-1",
            "--order",
            "10",
            "--format",
            "csv",
        ],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,coeff"));
    let coeffs: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(
        coeffs,
        vec!["1", "1", "0", "1", "0", "0", "1", "0", "0", "0", "1"]
    );
}

#[test]
fn verify_thm1_json_status_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "verify", "--id", "THM1", "--a", "3", "--order", "40", "--format", "json",
        ],
    );
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(reports[0]["status"], "pass");
    assert_eq!(reports[0]["id"], "THM1");
    assert_eq!(reports[0]["elapsedMs"], serde_json::Value::Null);
}

#[test]
fn saito_pass_and_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["saito", "--N", "30", "--order", "200", "--format", "json"],
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["N"], 30);
    assert_eq!(v["pass"], true);
    assert_eq!(v["firstNegative"], serde_json::Value::Null);
    assert_eq!(v["prefactor"], "31/3");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // verification failure: E(q) itself has negative coefficients
    let out = run_in(
        dir.path(),
        &["expand", "--eta", "1^1", "--order", "10", "--check-nonneg"],
    );
    assert_eq!(out.status.code(), Some(1));
    // usage errors
    let out = run_in(dir.path(), &["verify", "--id", "NOPE", "--order", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(dir.path(), &["verify", "--id", "THM1", "--order", "5"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "missing --a must be a usage error"
    );
    let out = run_in(dir.path(), &["theta", "--order", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // scan rejects non-conjecture ids
    let out = run_in(
        dir.path(),
        &["scan", "--id", "THM1", "--a", "2", "--order", "5"],
    );
    assert_eq!(out.status.code(), Some(2));
    // windowed ids require --window
    let out = run_in(
        dir.path(),
        &["scan", "--id", "CONJ2A", "--p", "1", "--order", "10"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jobs_determinism_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args_base = [
        "verify", "--id", "KID", "--t", "1..6", "--order", "60", "--format", "json",
    ];
    let mut one = args_base.to_vec();
    one.extend(["--jobs", "1"]);
    let mut eight = args_base.to_vec();
    eight.extend(["--jobs", "8"]);
    let a = run_in(dir.path(), &one);
    let b = run_in(dir.path(), &eight);
    assert!(a.status.success() && b.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "reports must be byte-identical across --jobs"
    );

    // windowed scan path as well
    let scan_base = [
        "scan",
        "--id",
        "CONJ2A",
        "--p",
        "1..4",
        "--order",
        "40",
        "--window=-25:25",
        "--format",
        "json",
    ];
    let mut one = scan_base.to_vec();
    one.extend(["--jobs", "1"]);
    let mut eight = scan_base.to_vec();
    eight.extend(["--jobs", "8"]);
    let a = run_in(dir.path(), &one);
    let b = run_in(dir.path(), &eight);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn repeated_invocations_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify", "--id", "EKIN", "--order", "20", "--format", "json",
    ];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_round_trip_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().join("custom-cache");
    let run_cached = |args: &[&str]| {
        Command::new(bin())
            .args(args)
            .current_dir(dir.path())
            .env("ETAQ_CACHE_DIR", &cache_dir)
            .output()
            .expect("spawn etaq")
    };
    let fresh = run_cached(&[
        "expand",
        "--eta",
        "5^5 * 1^-1",
        "--order",
        "50",
        "--format",
        "csv",
    ]);
    assert!(fresh.status.success());
    assert!(
        cache_dir.is_dir(),
        "cache dir should be created on first write"
    );
    let cached = run_cached(&[
        "expand",
        "--eta",
        "5^5 * 1^-1",
        "--order",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(
        fresh.stdout, cached.stdout,
        "cache hit must be byte-identical"
    );
    let nocache = run_cached(&[
        "expand",
        "--eta",
        "5^5 * 1^-1",
        "--order",
        "50",
        "--format",
        "csv",
        "--no-cache",
    ]);
    assert_eq!(fresh.stdout, nocache.stdout);
    let stats = run_cached(&["cache", "stats"]);
    assert!(stdout(&stats).contains("eta:1^-1 * 5^5:order=50"));
    let cleared = run_cached(&["cache", "clear"]);
    assert!(stdout(&cleared).contains("removed 1 entries"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run_in(
        dir.path(),
        &[
            "verify",
            "--id",
            "CAZQ2",
            "--order",
            "30",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let reports: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(reports[0]["status"], "pass");
}

#[test]
fn timings_flag_fills_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "verify",
            "--id",
            "KID",
            "--t",
            "2",
            "--order",
            "30",
            "--format",
            "json",
            "--timings",
        ],
    );
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(reports[0]["elapsedMs"].is_u64());
}
