//! Space-homogeneous blow-up oracles.
//!
//! Dropping the Laplacian leaves `y_ℓ' = |y_{ℓ−1}|^{p_ℓ}` (first order) or
//! `u_ℓ'' + u_ℓ' = |u_{ℓ−1}|^{p_ℓ}` (damped second order). These are solved
//! with classical RK4 under step-halving error control and used to calibrate
//! the PDE blow-up detection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::ExponentVector;

pub const DEFAULT_STEP_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 2_000_000;

/// Exact blow-up time of `y' = y^p`, `y(0) = y0`.
pub fn solve_first_order_exact(p: f64, y0: f64) -> f64 {
    y0.powf(1.0 - p) / (p - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    First,
    SecondDamped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSystem {
    pub order: Order,
    pub p: ExponentVector,
    /// Initial displacements `ε a_ℓ`.
    pub a: Vec<f64>,
    /// Initial velocities `ε b_ℓ` (ignored for first-order systems).
    pub b: Vec<f64>,
    pub epsilon: f64,
}

impl OdeSystem {
    pub fn first_order(p: ExponentVector, y0: Vec<f64>) -> Result<Self> {
        let k = p.len();
        Self::new(Order::First, p, y0, vec![0.0; k], 1.0)
    }

    /// `u'' + u' = |u_prev|^p` with `u(0) = u'(0) = ε` in every component.
    pub fn damped(p: ExponentVector, epsilon: f64) -> Result<Self> {
        let k = p.len();
        Self::new(Order::SecondDamped, p, vec![1.0; k], vec![1.0; k], epsilon)
    }

    pub fn new(
        order: Order,
        p: ExponentVector,
        a: Vec<f64>,
        b: Vec<f64>,
        epsilon: f64,
    ) -> Result<Self> {
        let k = p.len();
        if a.len() != k || b.len() != k {
            return Err(Error::Config(format!(
                "need {k} initial amplitudes per field, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if !(epsilon > 0.0) || a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::Config(
                "initial data must be finite with epsilon > 0".into(),
            ));
        }
        Ok(Self {
            order,
            p,
            a,
            b,
            epsilon,
        })
    }

    pub fn components(&self) -> usize {
        self.p.len()
    }

    fn initial(&self) -> Vec<f64> {
        let mut y: Vec<f64> = self.a.iter().map(|x| self.epsilon * x).collect();
        if self.order == Order::SecondDamped {
            y.extend(self.b.iter().map(|x| self.epsilon * x));
        }
        y
    }

    fn forcing(&self, y: &[f64], l: usize) -> f64 {
        let k = self.components();
        y[(l + k - 1) % k].abs().powf(self.p.as_slice()[l])
    }

    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        let k = self.components();
        match self.order {
            Order::First => {
                for (l, o) in out.iter_mut().enumerate().take(k) {
                    *o = self.forcing(y, l);
                }
            }
            Order::SecondDamped => {
                for l in 0..k {
                    out[l] = y[k + l];
                    out[k + l] = -y[k + l] + self.forcing(y, l);
                }
            }
        }
    }

    /// `(u_ℓ, u_ℓ', u_ℓ'')` read off the state.
    fn jet(&self, y: &[f64], l: usize) -> (f64, f64, f64) {
        let k = self.components();
        match self.order {
            Order::First => {
                let m = (l + k - 1) % k;
                let p = self.p.as_slice()[l];
                let prev = y[m];
                let d1 = self.forcing(y, l);
                let prev_d1 = self.forcing(y, m);
                let d2 = p * prev.abs().powf(p - 1.0) * prev.signum() * prev_d1;
                (y[l], d1, d2)
            }
            Order::SecondDamped => {
                let v = y[k + l];
                (y[l], v, -v + self.forcing(y, l))
            }
        }
    }

    /// Blow-up time extrapolated from the local rate: with `w = u/u'`,
    /// `u ∼ (T−t)^{−a}` gives `w' → −1/a` and `T ≈ t − w/w'`.
    fn extrapolate(&self, y: &[f64], t: f64, l: usize) -> Option<f64> {
        let (u, d1, d2) = self.jet(y, l);
        if !(u.abs() > 0.0 && d1 * u.signum() > 0.0) {
            return None;
        }
        let w = u / d1;
        let dw = 1.0 - u * d2 / (d1 * d1);
        (dw < 0.0).then(|| t - w / dw)
    }

    /// Remaining time from the analytic tail `∫_y^∞ ds/s^p` for `k = 1` first order.
    fn analytic_tail(&self, y: &[f64]) -> Option<f64> {
        (self.order == Order::First && self.components() == 1 && y[0] > 0.0)
            .then(|| solve_first_order_exact(self.p.as_slice()[0], y[0]))
    }
}

fn rk4(sys: &OdeSystem, y: &[f64], h: f64, scratch: &mut [Vec<f64>; 5]) -> Vec<f64> {
    let n = y.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    sys.rhs(y, k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    sys.rhs(tmp, k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    sys.rhs(tmp, k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    sys.rhs(tmp, k4);
    (0..n)
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveOptions {
    pub step_tol: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            step_tol: DEFAULT_STEP_TOL,
            max_steps: DEFAULT_MAX_STEPS,
            initial_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCrossing {
    pub component: usize,
    pub t_cross: f64,
    pub t_blow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupEstimate {
    pub t_blow: f64,
    /// Largest of the final step, the extrapolation drift and the
    /// accumulated local error scaled by `t_blow`.
    pub uncertainty: f64,
    /// End of the accepted step on which the threshold was first crossed.
    pub t_cross: f64,
    pub final_step: f64,
    pub steps: usize,
    /// Per-component crossings, in crossing order.
    pub crossings: Vec<ComponentCrossing>,
}

/// Integrates until `max |u_ℓ| > threshold` for every component.
pub fn integrate_adaptive(sys: &OdeSystem, threshold: f64) -> Result<BlowupEstimate> {
    integrate_adaptive_with(sys, threshold, &AdaptiveOptions::default())
}

pub fn integrate_adaptive_with(
    sys: &OdeSystem,
    threshold: f64,
    opts: &AdaptiveOptions,
) -> Result<BlowupEstimate> {
    if !(threshold >= 1e6) {
        return Err(Error::OutOfRange {
            what: "blow-up threshold",
            detail: format!("{threshold} < 1e6"),
        });
    }
    let k = sys.components();
    let mut y = sys.initial();
    let n = y.len();
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let mut t: f64 = 0.0;
    let mut h = opts.initial_step;
    let mut steps = 0;
    let mut crossings: Vec<ComponentCrossing> = Vec::new();
    let mut first: Option<(f64, f64, f64)> = None;
    let mut prev_extrapolation: Option<f64> = None;
    // Sum of accepted local relative errors; bounds the relative drift of y.
    let mut accumulated = 0.0;

    while steps < opts.max_steps {
        let full = rk4(sys, &y, h, &mut scratch);
        let half = rk4(sys, &y, 0.5 * h, &mut scratch);
        let two = rk4(sys, &half, 0.5 * h, &mut scratch);
        let err = two
            .iter()
            .zip(&full)
            .map(|(a, b)| (a - b).abs() / 15.0 / a.abs().max(1e-300))
            .fold(0.0, f64::max);
        if !err.is_finite() || err > opts.step_tol {
            let factor = if err.is_finite() {
                (0.9 * (opts.step_tol / err).powf(0.2)).max(0.1)
            } else {
                0.1
            };
            h *= factor;
            if h < 1e-14 * t.max(1.0) {
                return Err(Error::NoBlowupAtHorizon { t });
            }
            continue;
        }
        steps += 1;
        accumulated += err;
        let last_h = h;
        let y_new: Vec<f64> = two
            .iter()
            .zip(&full)
            .map(|(a, b)| a + (a - b) / 15.0)
            .collect();
        t += h;
        y = y_new;
        h *= (0.9 * (opts.step_tol / err.max(1e-300)).powf(0.2)).min(4.0);

        let extrapolated = sys.extrapolate(&y, t, 0);
        for l in 0..k {
            if y[l].abs() > threshold && !crossings.iter().any(|c| c.component == l) {
                let t_blow = sys
                    .analytic_tail(&y)
                    .map(|tail| t + tail)
                    .or_else(|| sys.extrapolate(&y, t, l))
                    .unwrap_or(t);
                crossings.push(ComponentCrossing {
                    component: l,
                    t_cross: t,
                    t_blow,
                });
                if first.is_none() {
                    let drift = match (sys.analytic_tail(&y), extrapolated, prev_extrapolation) {
                        (Some(_), _, _) => 0.0,
                        (None, Some(a), Some(b)) => (a - b).abs(),
                        _ => 0.0,
                    };
                    first = Some((t_blow, last_h, drift));
                }
            }
        }
        prev_extrapolation = extrapolated;
        if crossings.len() == k {
            let (t_blow, final_step, drift) = first.expect("set with the first crossing");
            return Ok(BlowupEstimate {
                t_blow,
                uncertainty: final_step.max(drift).max(accumulated * t_blow),
                t_cross: crossings[0].t_cross,
                final_step,
                steps,
                crossings,
            });
        }
    }
    Err(Error::NoBlowupAtHorizon { t })
}
