use std::fs;
use std::process::{Command, Output};

use ris_ntn_sim::experiment::CSV_HEADER;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ris-ntn-sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn budget_prints_path_loss() {
    let out = bin(&["budget", "--distance-m", "600000", "--freq-hz", "19e9"]);
    assert!(out.status.success());
    let loss: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((loss - 173.59).abs() <= 0.01);
}

#[test]
fn budget_rejects_zero_distance() {
    let out = bin(&["budget", "--distance-m", "0", "--freq-hz", "19e9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error kind=config message="), "{err}");
}

#[test]
fn validate_reports_unknown_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    fs::write(&path, "tx_powr_dbm = 50\n").unwrap();
    let out = bin(&["validate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("tx_powr_dbm"));
}

#[test]
fn validate_echoes_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ok.conf");
    fs::write(&path, "# small\narchitectures = sc, gc:3\nelements_sweep = 6, 8\n").unwrap();
    let out = bin(&["validate", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gc:3 does not divide M = 8"));
    assert!(text.contains("trials = 1000"));
}

#[test]
fn sweep_writes_csv_and_sidecar_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "elements_sweep = 4, 8\ntrials = 500\n").unwrap();
    let csv = dir.path().join("run.csv");
    let out = bin(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--trials",
        "3",
        "--seed",
        "7",
        "--arch",
        "sc,fc,gc:4",
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    // 3 archs × 2 element counts × (3 trials + mean + stderr)
    assert_eq!(lines.len(), 1 + 3 * 2 * 5);
    assert!(lines.iter().any(|l| l.starts_with("gc:4,8,stderr,")));

    let meta = fs::read_to_string(dir.path().join("run.meta.txt")).unwrap();
    assert!(meta.contains("trials = 3"));
    assert!(meta.contains("seed = 7"));
    assert!(meta.contains("dBm/Hz"));
}

#[test]
fn sweep_bad_arch_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let out = bin(&["sweep", "--out", csv.to_str().unwrap(), "--arch", "sc,zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_unwritable_output_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("missing").join("x.csv");
    let out = bin(&["sweep", "--out", csv.to_str().unwrap(), "--trials", "1", "--arch", "sc"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error kind=runtime"));
}
