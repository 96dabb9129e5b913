//! Log-log fits of measured lifespans against the predicted laws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sweep::SweepResult;

pub const MIN_FIT_POINTS: usize = 4;
/// Runs whose blow-up lands within this many steps of the horizon are censored.
pub const CENSOR_STEPS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitModel {
    /// `T = A ε^{−b}`
    PowerLaw,
    /// `T = A (ε^{−1} log ε^{−1})^{b}`
    PowerLogLaw,
}

impl FitModel {
    pub fn abscissa(&self, eps: f64) -> f64 {
        match self {
            FitModel::PowerLaw => 1.0 / eps,
            FitModel::PowerLogLaw => (1.0 / eps) * (1.0 / eps).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub epsilon: f64,
    pub t_blow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    pub a: f64,
    pub b: f64,
    /// Euclidean norm of the log-residuals.
    pub residual: f64,
    pub b_theory: Option<f64>,
    /// `|b − b_theory| / b_theory`.
    pub deviation: Option<f64>,
    pub points: usize,
}

/// Least squares of `log T` on `log x(ε)`.
pub fn fit_scaling(
    points: &[FitPoint],
    model: FitModel,
    b_theory: Option<f64>,
) -> Result<FitResult> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            got: points.len(),
        });
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        let x = model.abscissa(p.epsilon);
        if !(x > 0.0) || !(p.t_blow > 0.0) || !x.is_finite() || !p.t_blow.is_finite() {
            return Err(Error::Domain(format!(
                "point (eps={}, T={}) has no logarithm under {model:?}",
                p.epsilon, p.t_blow
            )));
        }
        xs.push(x.ln());
        ys.push(p.t_blow.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let spread = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - xs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(spread > 1e-9) {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let log_a = my - b * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - log_a - b * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(FitResult {
        model,
        a: log_a.exp(),
        b,
        residual,
        b_theory,
        deviation: b_theory.map(|bt| (b - bt).abs() / bt),
        points: points.len(),
    })
}

/// Blow-up points of a sweep, dropping runs censored by their horizon.
pub fn fit_points(result: &SweepResult) -> Vec<FitPoint> {
    result
        .points
        .iter()
        .filter_map(|p| {
            let t = p.t_blow()?;
            let dt = p.dt.unwrap_or(0.0);
            (t < p.horizon - CENSOR_STEPS * dt).then_some(FitPoint {
                epsilon: p.epsilon,
                t_blow: t,
            })
        })
        .collect()
}

/// Constants `C_i = T_i / x(ε_i)^b` of a one-sided bound `T ≤ C x(ε)^b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneSidedCheck {
    pub b: f64,
    pub constants: Vec<f64>,
    /// The single constant that bounds every point: `max C_i`.
    pub c: f64,
    /// `max C_i / min C_i`.
    pub spread: f64,
}

pub fn one_sided_constants(points: &[FitPoint], model: FitModel, b: f64) -> Result<OneSidedCheck> {
    if points.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let constants: Vec<f64> = points
        .iter()
        .map(|p| p.t_blow / model.abscissa(p.epsilon).powf(b))
        .collect();
    let c = constants.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(OneSidedCheck {
        b,
        constants,
        c,
        spread: c / lo,
    })
}
