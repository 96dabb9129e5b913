//! Experiment orchestration: configs, sweeps, fits, lemma batches, reports.

pub mod config;
pub mod fit;
pub mod lemma;
pub mod report;
pub mod sweep;

pub use config::{config_hash, load_config, parse_config, Overrides};
pub use fit::{
    fit_points, fit_scaling, one_sided_constants, FitModel, FitPoint, FitResult, OneSidedCheck,
};
pub use lemma::{verify_lemma_batch, LambdaChoice, LemmaBatchReport, LemmaBatchSpec};
pub use report::{report, write_sweep_artifacts, ReportSummary};
pub use sweep::{
    geometric_eps, sweep, HorizonRule, SweepOutcome, SweepPoint, SweepResult, SweepSpec,
};
