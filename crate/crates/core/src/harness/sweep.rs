//! ε-sweeps over a base run configuration.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{classify_regime, BoundForm, DEFAULT_TOL_CRIT};
use crate::solver::{run, RunConfig, RunRecord};

/// `n` geometric points from `hi` down to `lo`.
pub fn geometric_eps(hi: f64, lo: f64, n: usize) -> Result<Vec<f64>> {
    if !(hi > lo && lo > 0.0) || n < 1 {
        return Err(Error::Config(format!(
            "need hi > lo > 0 and n >= 1, got {hi}, {lo}, {n}"
        )));
    }
    if n == 1 {
        return Ok(vec![hi]);
    }
    let ratio = (lo / hi).powf(1.0 / (n - 1) as f64);
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                lo
            } else {
                hi * ratio.powi(i as i32)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HorizonRule {
    /// The base config's `t_end` for every ε.
    Fixed,
    /// `T_end(ε) = factor · (ε/ε_ref)^{−b} · T_ref`, with `b` from the
    /// classifier and `(ε_ref, T_ref)` from a pilot at the largest ε.
    /// Falls back to the base horizon for non-polynomial regimes.
    BoundAware { factor: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub base: RunConfig,
    pub epsilons: Vec<f64>,
    pub horizon: HorizonRule,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SweepSpec {
    pub fn new(base: RunConfig, epsilons: Vec<f64>) -> Self {
        Self {
            base,
            epsilons,
            horizon: HorizonRule::Fixed,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(Error::Config(
                "epsilon values must be finite and > 0".into(),
            ));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config(
                "epsilon list must be strictly decreasing".into(),
            ));
        }
        if let HorizonRule::BoundAware { factor } = self.horizon {
            if !(factor > 0.0) || !factor.is_finite() {
                return Err(Error::Config(format!(
                    "horizon factor {factor} must be > 0"
                )));
            }
        }
        self.base.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum SweepOutcome {
    BlewUp { t_blow: f64 },
    Survived { t_end: f64 },
    Failed { error: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub epsilon: f64,
    pub horizon: f64,
    pub outcome: SweepOutcome,
    pub dt: Option<f64>,
    pub t_cross: Option<f64>,
    #[serde(skip)]
    pub record: Option<RunRecord>,
}

impl SweepPoint {
    pub fn t_blow(&self) -> Option<f64> {
        match self.outcome {
            SweepOutcome::BlewUp { t_blow } => Some(t_blow),
            _ => None,
        }
    }

    pub fn verdict_label(&self) -> &'static str {
        match self.outcome {
            SweepOutcome::BlewUp { .. } => "blew_up",
            SweepOutcome::Survived { .. } => "survived",
            SweepOutcome::Failed { .. } => "failed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub base: RunConfig,
    pub points: Vec<SweepPoint>,
    pub elapsed_ms: u128,
}

impl SweepResult {
    pub fn all_blew_up(&self) -> bool {
        !self.points.is_empty() && self.points.iter().all(|p| p.t_blow().is_some())
    }
}

fn horizons(spec: &SweepSpec) -> Result<Vec<f64>> {
    let fixed = vec![spec.base.time.t_end; spec.epsilons.len()];
    let HorizonRule::BoundAware { factor } = spec.horizon else {
        return Ok(fixed);
    };
    let bound = classify_regime(
        &spec.base.exponents()?,
        spec.base.system.dim,
        &spec.base.boundary()?,
        DEFAULT_TOL_CRIT,
    );
    let b = match bound {
        Ok(b) if b.form == BoundForm::Polynomial => b.exponent,
        _ => None,
    };
    let (Some(b), Some(&eps_ref)) = (b, spec.epsilons.first()) else {
        return Ok(fixed);
    };
    let mut pilot = spec.base.clone();
    pilot.data.epsilon = eps_ref;
    pilot.time.history_stride = None;
    let Some(t_ref) = run(&pilot)?.verdict.t_blow() else {
        log::warn!("pilot run at eps={eps_ref} did not blow up; using the fixed horizon");
        return Ok(fixed);
    };
    Ok(spec
        .epsilons
        .iter()
        .map(|&e| factor * (e / eps_ref).powf(-b) * t_ref)
        .collect())
}

/// Runs every ε independently; a failing run is recorded, not propagated.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let started = std::time::Instant::now();
    if spec.epsilons.is_empty() {
        return Ok(SweepResult {
            base: spec.base.clone(),
            points: Vec::new(),
            elapsed_ms: 0,
        });
    }
    spec.validate()?;
    let horizons = horizons(spec)?;
    // One grid for the whole sweep: size r_max for the longest horizon.
    let mut base = spec.base.clone();
    if base.grid.r_max.is_none() {
        let t_max = horizons.iter().copied().fold(0.0, f64::max);
        base.grid.r_max = Some(base.data.center + base.data.width + t_max + 1.0);
    }
    let one = |index: usize| -> SweepPoint {
        let mut config = base.clone();
        config.data.epsilon = spec.epsilons[index];
        config.time.t_end = horizons[index];
        let epsilon = config.data.epsilon;
        match run(&config) {
            Ok(record) => SweepPoint {
                index,
                epsilon,
                horizon: horizons[index],
                outcome: match record.verdict.t_blow() {
                    Some(t_blow) => SweepOutcome::BlewUp { t_blow },
                    None => SweepOutcome::Survived {
                        t_end: horizons[index],
                    },
                },
                dt: Some(record.dt),
                t_cross: record.t_cross,
                record: Some(record),
            },
            Err(e) => SweepPoint {
                index,
                epsilon,
                horizon: horizons[index],
                outcome: SweepOutcome::Failed {
                    error: e.to_string(),
                },
                dt: None,
                t_cross: None,
                record: None,
            },
        }
    };
    let n = spec.epsilons.len();
    let points: Vec<SweepPoint> = match spec.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(one).collect())
        }
        None => (0..n).into_par_iter().map(one).collect(),
    };
    Ok(SweepResult {
        base: spec.base.clone(),
        points,
        elapsed_ms: started.elapsed().as_millis(),
    })
}
