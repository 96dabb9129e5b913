//! Sweep artifacts on disk: CSV table, JSON manifest and plot data.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{classify_regime, BoundForm, LifespanBound, DEFAULT_TOL_CRIT};
use crate::harness::config::config_hash;
use crate::harness::fit::{
    fit_scaling, one_sided_constants, FitModel, FitPoint, FitResult, OneSidedCheck, CENSOR_STEPS,
    MIN_FIT_POINTS,
};
use crate::harness::sweep::{SweepOutcome, SweepResult};
use crate::solver::RunConfig;

pub const SWEEP_CSV: &str = "sweep.csv";
pub const MANIFEST: &str = "manifest.json";
pub const PLOT_DATA: &str = "plot.dat";
pub const FIT_JSON: &str = "fit.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub epsilon: f64,
    pub t_blow: Option<f64>,
    pub horizon: f64,
    pub verdict: String,
    pub t_cross: Option<f64>,
    pub dt: Option<f64>,
    pub error: Option<String>,
}

pub fn sweep_rows(result: &SweepResult) -> Vec<SweepRow> {
    result
        .points
        .iter()
        .map(|p| SweepRow {
            index: p.index,
            epsilon: p.epsilon,
            t_blow: p.t_blow(),
            horizon: p.horizon,
            verdict: p.verdict_label().to_string(),
            t_cross: p.t_cross,
            dt: p.dt,
            error: match &p.outcome {
                SweepOutcome::Failed { error } => Some(error.clone()),
                _ => None,
            },
        })
        .collect()
}

const CSV_HEADER: [&str; 8] = [
    "index", "epsilon", "t_blow", "horizon", "verdict", "t_cross", "dt", "error",
];

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Fit points from CSV rows, applying the horizon censoring guard.
pub fn rows_to_points(rows: &[SweepRow]) -> Vec<FitPoint> {
    rows.iter()
        .filter_map(|row| {
            let t = row.t_blow?;
            (t < row.horizon - CENSOR_STEPS * row.dt.unwrap_or(0.0)).then_some(FitPoint {
                epsilon: row.epsilon,
                t_blow: t,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub epsilons: Vec<f64>,
    pub runs: usize,
    pub elapsed_ms: u128,
    pub created_unix: u64,
    /// Bound description at write time; `report` recomputes it.
    pub theory: String,
}

pub fn theory_for(config: &RunConfig) -> Result<LifespanBound> {
    classify_regime(
        &config.exponents()?,
        config.system.dim,
        &config.boundary()?,
        DEFAULT_TOL_CRIT,
    )
}

fn model_for(bound: &LifespanBound) -> Option<FitModel> {
    match bound.form {
        BoundForm::Polynomial => Some(FitModel::PowerLaw),
        BoundForm::PolynomialLog => Some(FitModel::PowerLogLaw),
        _ => None,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Whitespace-separated `log x(ε)`, `log T` and the theory line through the
/// centroid of the data, where `x = 1/ε` or `ε^{-1} log ε^{-1}`.
pub fn write_plot_data(path: &Path, points: &[FitPoint], bound: &LifespanBound) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let model = model_for(bound).unwrap_or(FitModel::PowerLaw);
    let slope = bound.polynomial_slope();
    writeln!(w, "# bound: {}", bound.describe()).map_err(io)?;
    match slope {
        Some(b) => writeln!(w, "# theory_slope_vs_log_eps {}", -round_sig(b)).map_err(io)?,
        None => writeln!(w, "# theory_slope_vs_log_eps none").map_err(io)?,
    }
    writeln!(w, "# log_eps log_x log_t log_t_theory").map_err(io)?;
    let logs: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| {
            (
                p.epsilon.ln(),
                model.abscissa(p.epsilon).ln(),
                p.t_blow.ln(),
            )
        })
        .collect();
    let n = logs.len().max(1) as f64;
    let cx = logs.iter().map(|l| l.1).sum::<f64>() / n;
    let cy = logs.iter().map(|l| l.2).sum::<f64>() / n;
    for (le, lx, lt) in logs {
        match slope {
            Some(b) => writeln!(w, "{le} {lx} {lt} {}", cy + b * (lx - cx)).map_err(io)?,
            None => writeln!(w, "{le} {lx} {lt} nan").map_err(io)?,
        }
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Rounds to 12 decimals so exact rationals print exactly.
fn round_sig(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactPaths {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub plot: PathBuf,
}

pub fn write_sweep_artifacts(dir: &Path, result: &SweepResult) -> Result<ArtifactPaths> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows = sweep_rows(result);
    let paths = ArtifactPaths {
        csv: dir.join(SWEEP_CSV),
        manifest: dir.join(MANIFEST),
        plot: dir.join(PLOT_DATA),
    };
    write_sweep_csv(&paths.csv, &rows)?;
    let bound = theory_for(&result.base);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config_hash(&result.base),
        config: result.base.clone(),
        epsilons: result.points.iter().map(|p| p.epsilon).collect(),
        runs: result.points.len(),
        elapsed_ms: result.elapsed_ms,
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        theory: match &bound {
            Ok(b) => b.describe(),
            Err(e) => e.to_string(),
        },
    };
    write_json(&paths.manifest, &manifest)?;
    if let Ok(bound) = bound {
        write_plot_data(&paths.plot, &rows_to_points(&rows), &bound)?;
    }
    Ok(paths)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub bound: LifespanBound,
    pub points: Vec<FitPoint>,
    pub runs: usize,
    pub all_blew_up: bool,
    /// Present for polynomial regimes with enough uncensored points.
    pub fit: Option<FitResult>,
    pub one_sided: Option<OneSidedCheck>,
}

/// Rebuilds fit and plot data in `dir` from `sweep.csv` and `manifest.json`,
/// recomputing the theoretical exponent from the stored config.
pub fn report(dir: &Path) -> Result<ReportSummary> {
    let manifest_path = dir.join(MANIFEST);
    let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    let rows = read_sweep_csv(&dir.join(SWEEP_CSV))?;
    let bound = theory_for(&manifest.config)?;
    let points = rows_to_points(&rows);
    write_plot_data(&dir.join(PLOT_DATA), &points, &bound)?;
    let model = model_for(&bound);
    let fit = match (model, bound.polynomial_slope()) {
        (Some(m), Some(b)) if points.len() >= MIN_FIT_POINTS => {
            Some(fit_scaling(&points, m, Some(b))?)
        }
        _ => None,
    };
    let one_sided = match (model, bound.polynomial_slope()) {
        (Some(m), Some(b)) if !points.is_empty() => Some(one_sided_constants(&points, m, b)?),
        _ => None,
    };
    let summary = ReportSummary {
        bound,
        runs: rows.len(),
        all_blew_up: !rows.is_empty() && rows.iter().all(|r| r.t_blow.is_some()),
        points,
        fit,
        one_sided,
    };
    write_json(&dir.join(FIT_JSON), &summary)?;
    Ok(summary)
}
