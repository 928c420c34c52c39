use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn maxvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxvar"))
        .args(args)
        .env_remove("MAXVAR_THREADS")
        .output()
        .expect("binary runs")
}

fn tent(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("tent.json");
    std::fs::write(&path, r#"{"knots": [[0, 1], [1, 0]]}"#).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_reports_indicator_value_at_origin() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ind.csv");
    std::fs::write(&path, "0,1\n1,1\n").unwrap();
    let out = maxvar(&["eval", "--n", "2", "--beta", "0.5", "--profile", arg(&path), "--s", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = rows[0]["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1e-9, "{value}");
}

#[test]
fn invalid_parameters_exit_with_usage_code() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let out = maxvar(&["eval", "--n", "2", "--beta", "2.5", "--profile", arg(&p), "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(maxvar(&["eval", "--bogus"]).status.code(), Some(2));
    let out = maxvar(&["eval", "--n", "2", "--beta", "0.5", "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2), "missing profile");
}

#[test]
fn negative_radii_are_rejected() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "-1,1\n1,0\n").unwrap();
    let out = maxvar(&["eval", "--n", "2", "--beta", "0.5", "--profile", arg(&path), "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_has_header_and_columns() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let out_path = dir.path().join("sweep.csv");
    let out = maxvar(&[
        "sweep", "--n", "2", "--beta", "0.5", "--profile", arg(&p), "--grid", "0.05:4:12:log", "--out",
        arg(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut body = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(
        body.next().unwrap(),
        "s,value,d,r,contact,c,region,dmdr_fd,dmdr_formula,corner_flag"
    );
    assert_eq!(body.count(), 12);
    assert!(text.starts_with("# maxvar"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        format!(r#"{{"n": 3, "beta": 1.0, "profile": {:?}}}"#, arg(&p)),
    )
    .unwrap();
    let a = maxvar(&["--config", arg(&cfg), "eval", "--s", "0.3", "--format", "csv"]);
    let b = maxvar(&["eval", "--n", "3", "--beta", "1", "--profile", arg(&p), "--s", "0.3", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    std::fs::write(&cfg, r#"{"n": 2, "unknown": 1}"#).unwrap();
    let c = maxvar(&["--config", arg(&cfg), "eval", "--s", "0.3"]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn verify_divergence_passes() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let out = maxvar(&[
        "verify", "--n", "3", "--beta", "0.5", "--profile", arg(&p), "--suite", "divergence", "--seed", "4",
        "--random-balls", "30", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["counts"]["pass"].as_u64(), Some(30));
}

#[test]
fn seeded_oracle_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let args = [
        "oracle", "--mode", "mc", "--n", "2", "--beta", "0.5", "--profile", arg(&p), "--d", "0.4", "--r", "0.5",
        "--samples", "50000", "--seed", "9",
    ];
    let a = maxvar(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_maxvar"))
        .args(args)
        .env("MAXVAR_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ratio_reports_exponent_identity() {
    let dir = TempDir::new().unwrap();
    let p = tent(&dir);
    let out = maxvar(&["ratio", "--n", "2", "--beta", "0.5", "--profile", arg(&p), "--grid", "0.01:8:32:log"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["ratio"].as_f64().unwrap().is_finite());
    assert!(doc["exponent_identity_residual"].as_f64().unwrap() <= 1e-12);
    assert!((doc["q"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
}
