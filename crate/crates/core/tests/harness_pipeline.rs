use std::process::Command;

use exterior_blowup::harness::report::{read_sweep_csv, rows_to_points};
use exterior_blowup::harness::{
    fit_points, fit_scaling, geometric_eps, report, sweep, write_sweep_artifacts, FitModel,
    FitPoint, SweepSpec,
};
use exterior_blowup::solver::RunConfig;
use proptest::prelude::*;

const BIN: &str = env!("CARGO_BIN_EXE_blowup-lab");

#[test]
fn sweep_artifacts_reproduce_the_fit() {
    let base = RunConfig::new(&[1.4, 1.4], 3, 800, 60.0, 0.8);
    let result = sweep(&SweepSpec::new(base, geometric_eps(0.8, 0.2, 4).unwrap())).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = write_sweep_artifacts(dir.path(), &result).unwrap();
    let direct = fit_scaling(&fit_points(&result), FitModel::PowerLaw, Some(1.0)).unwrap();
    let from_csv = rows_to_points(&read_sweep_csv(&paths.csv).unwrap());
    let again = fit_scaling(&from_csv, FitModel::PowerLaw, Some(1.0)).unwrap();
    assert!((direct.b - again.b).abs() < 1e-12);
    let summary = report(dir.path()).unwrap();
    assert!((summary.fit.unwrap().b - direct.b).abs() < 1e-12);
    assert!(dir.path().join("fit.json").exists());
}

#[test]
fn cli_gamma_json_record() {
    let out = Command::new(BIN)
        .args(["gamma", "1.4,1.4", "--dim", "3", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["gamma_max"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    assert!((v["Gamma_excess"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["regime"], "subcritical");
}

#[test]
fn cli_classify_critical_neumann() {
    let out = Command::new(BIN)
        .args([
            "classify", "2,2", "--dim", "2", "--alpha", "1", "--beta", "0", "--json",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "critical");
    assert!(v["bound"].as_str().unwrap().starts_with("T <= exp("));
}

#[test]
fn cli_rejects_bad_input() {
    let out = Command::new(BIN).args(["gamma", "0.5,2"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn cli_sweep_fit_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[system]\np = [1.4, 1.4]\ndim = 3\n[grid]\ncells = 600\n[time]\nt_end = 60.0\n[data]\nepsilon = 0.5\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let sw = Command::new(BIN)
        .args([
            "sweep",
            cfg.to_str().unwrap(),
            "--eps-list",
            "0.8,0.6,0.4,0.3",
            "--threads",
            "2",
            "--out",
        ])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(sw.status.success());
    let fit = Command::new(BIN)
        .args(["fit", out_dir.join("sweep.csv").to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&fit.stdout).unwrap();
    assert_eq!(v["points"], 4);
    let rep = Command::new(BIN)
        .args(["report", out_dir.to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    let r: serde_json::Value = serde_json::from_slice(&rep.stdout).unwrap();
    assert!((r["fit"]["b"].as_f64().unwrap() - v["b"].as_f64().unwrap()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn fit_recovers_synthetic_laws(a in 0.1f64..10.0, b in 0.2f64..3.0) {
        let eps = [0.05, 0.1, 0.2, 0.4, 0.8];
        let pts: Vec<FitPoint> = eps.iter().map(|&e| FitPoint { epsilon: e, t_blow: a * e.powf(-b) }).collect();
        let f = fit_scaling(&pts, FitModel::PowerLaw, Some(b)).unwrap();
        prop_assert!((f.b - b).abs() < 1e-9 && (f.a - a).abs() < 1e-9 * a);
    }
}
