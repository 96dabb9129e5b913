use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent vector: {0}")]
    InvalidExponents(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("singular gamma system (det = {det})")]
    SingularSystem { det: f64 },

    /// β ≠ 0, d = 2, critical, with unequal exponents: no upper bound is known.
    #[error("no lifespan bound is known for this regime: {0}")]
    Unclassifiable(String),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimated error {estimate:.3e} after {evaluations} evaluations")]
    Convergence { estimate: f64, evaluations: usize },

    #[error("insufficient coverage: {0}")]
    Coverage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("CFL violation: dt = {dt} exceeds {limit} (cfl * dr)")]
    Cfl { dt: f64, limit: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("initial data rejected: positivity functional = {value:e}")]
    DataPositivity { value: f64 },

    #[error("no blow-up before step budget exhausted (t = {t})")]
    NoBlowupAtHorizon { t: f64 },

    #[error("fit needs at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("degenerate abscissa spread in fit")]
    DegenerateFit,

    #[error("lemma verification violation: {0}")]
    Violation(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
