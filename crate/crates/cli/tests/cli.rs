use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wiener-chaos"))
        .args(args)
        .env_remove("CHAOS_SEED")
        .output()
        .expect("binary runs")
}

const SMALL: [&str; 6] = ["--trials", "10", "--paths", "2000", "--grid", "8"];

fn small(extra: &[&str]) -> Output {
    let mut args: Vec<&str> = SMALL.to_vec();
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = small(&["--suite", "all"]);
    let b = small(&["--suite", "all"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_has_stable_top_level_fields() {
    for suite in ["product", "isometry-mc"] {
        let out = small(&["--suite", suite]);
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let keys: Vec<&str> = report
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        for key in ["suite", "config", "cases", "pass", "seed", "runtime_ms"] {
            assert!(keys.contains(&key), "{suite} report lacks {key}");
        }
        assert_eq!(report["suite"], suite);
        assert_eq!(report["pass"], true);
        assert!(report["runtime_ms"].is_null());
    }
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = small(&[
        "--suite",
        "stroock",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("suite,case,inputs_digest,observed,threshold,pass")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r.starts_with("stroock,stroock/") && r.ends_with(",true")));
}

#[test]
fn seed_falls_back_to_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_wiener-chaos"))
        .args(SMALL)
        .args(["--suite", "leibniz"])
        .env("CHAOS_SEED", "7")
        .output()
        .unwrap();
    let explicit = small(&["--suite", "leibniz", "--seed", "7"]);
    assert_eq!(with_env.stdout, explicit.stdout);
    let report: serde_json::Value = serde_json::from_slice(&explicit.stdout).unwrap();
    assert_eq!(report["seed"], 7);
}

#[test]
fn failing_cases_exit_one() {
    // a tolerance below rounding makes the algebraic checks fail
    let out = small(&["--suite", "product", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["config"]["tol"], 1e-300);
}

#[test]
fn errors_exit_two() {
    assert_eq!(run(&["--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["--suite", "product", "--max-order", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["--suite", "product", "--trials", "0"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/report.json");
    let out = small(&["--suite", "stroock", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let out = small(&["--suite", "stroock", "--timing"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["runtime_ms"].is_u64());
}
