//! Integrals over the space-time regions `Q_R` and `Q*_R` under radial
//! symmetry, the comparison functions `Θ_p(R)`, and the functionals
//! `I_R[u_ℓ]` evaluated on solver output.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{compute_gamma, BoundaryCondition, ExponentVector};
use crate::solver::SolutionHistory;
use crate::testfn::{HarmonicWeight, ScaledCutoff};

/// Area of the unit sphere `S^{d-1}`: 2, 2π, 4π, 2π², …
pub fn sphere_area(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / f64::from(d - 2) * sphere_area(d - 2),
    }
}

/// `∫_Ω f dx = factor · ∫_1^∞ f(r) r^{d-1} dr` for radial `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMeasure {
    pub dim: u32,
    pub factor: f64,
}

impl RadialMeasure {
    pub fn new(dim: u32) -> Self {
        Self {
            dim,
            factor: sphere_area(dim),
        }
    }

    /// One half-line only (`d = 1`, factor 1).
    pub fn single_ray() -> Self {
        Self {
            dim: 1,
            factor: 1.0,
        }
    }

    pub fn density(&self, r: f64) -> f64 {
        self.factor * r.powi(self.dim as i32 - 1)
    }

    /// Trapezoidal `∫ f(r) dμ` over equally spaced nodes `r_j = 1 + j·dr`.
    pub fn trapezoid(&self, values: &[f64], dr: f64) -> f64 {
        let n = values.len();
        if n < 2 {
            return 0.0;
        }
        let sum: f64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                w * v * self.density(1.0 + j as f64 * dr)
            })
            .sum();
        sum * dr
    }
}

/// `Θ_p(R)` comparison function of the Hölder step.
pub fn theta(radius: f64, d: u32, bc: &BoundaryCondition, p: f64) -> Result<f64> {
    if !(radius > 1.0) {
        return Err(Error::Domain(format!("theta needs R > 1, got {radius}")));
    }
    if !(p > 1.0) {
        return Err(Error::InvalidExponents(format!("p = {p} must be > 1")));
    }
    let df = f64::from(d);
    Ok(match (d, bc.beta_nonzero()) {
        (0, _) => {
            return Err(Error::OutOfRange {
                what: "dimension",
                detail: "d must be >= 1".into(),
            })
        }
        (1, true) => radius.powf(2.0 - 4.0 / p),
        (1, false) => radius.powf(1.0 - 3.0 / p),
        (2, true) => radius.powf(2.0 - 4.0 / p) * radius.ln().powf(1.0 - 1.0 / p),
        _ => radius.powf(df - (df + 2.0) / p),
    })
}

// 15-point Kronrod nodes on [0, 1] (symmetric) with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss–Kronrod (7/15) on `[a, b]` split at `breaks`.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    max_evals: usize,
) -> Result<QuadratureResult> {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(|x, y| x.total_cmp(y));
    points.dedup();

    let mut segments: Vec<(f64, f64, f64, f64)> = points
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let mut evaluations = 15 * segments.len();

    loop {
        let value: f64 = segments.iter().map(|s| s.2).sum();
        let error: f64 = segments.iter().map(|s| s.3).sum();
        if error <= rel_tol * value.abs() || error <= f64::MIN_POSITIVE {
            return Ok(QuadratureResult {
                value,
                error,
                evaluations,
            });
        }
        if evaluations + 30 > max_evals {
            return Err(Error::Convergence {
                estimate: error,
                evaluations,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evaluations += 30;
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}

/// Time extent of `Q*_R ∩ {0 < t < horizon}` at radius `r`.
fn shell_time_length(radius: f64, r: f64, horizon: f64) -> f64 {
    let x4 = (r - 1.0).powi(4);
    let r4 = radius.powi(4);
    if x4 >= r4 {
        return 0.0;
    }
    let upper = (r4 - x4).sqrt().min(horizon);
    let lower = (0.5 * r4 - x4).max(0.0).sqrt().min(horizon);
    (upper - lower).max(0.0)
}

/// `∫_{Q*_R} Ψ d(t, x)` for radial `Ψ`.
///
/// The time extent of the shell is exact for each `r`; the remaining radial
/// integral is adaptive with breakpoints at the kinks of that extent.
pub fn measure_qrstar_psi(
    radius: f64,
    d: u32,
    bc: &BoundaryCondition,
    horizon: f64,
) -> Result<f64> {
    if !(radius >= 2.0) {
        return Err(Error::Domain(format!("measure needs R >= 2, got {radius}")));
    }
    if !(horizon >= radius * radius) {
        return Err(Error::Coverage(format!(
            "time horizon {horizon} truncates Q_R (needs >= R^2 = {})",
            radius * radius
        )));
    }
    let weight = HarmonicWeight::new(d, *bc)?;
    let measure = RadialMeasure::new(d);
    let integrand = |r: f64| {
        weight.value_extended(r) * measure.density(r) * shell_time_length(radius, r, horizon)
    };
    let kink = 1.0 + radius * 0.5f64.powf(0.25);
    let res = adaptive_gk(integrand, 1.0, 1.0 + radius, &[kink], 1e-9, 2_000_000)?;
    Ok(res.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Weighting {
    /// `Ψ φ_R`
    Full,
    /// `Ψ φ*_R`
    Star,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub radius: f64,
    /// 0-based component index.
    pub component: usize,
    pub which: Weighting,
}

fn check_coverage(history: &SolutionHistory, radius: f64) -> Result<()> {
    let needed_t = history.t_final.min(radius * radius);
    let last = history.times.last().copied().unwrap_or(0.0);
    if last + 1e-9 * needed_t.max(1.0) < needed_t {
        return Err(Error::Coverage(format!(
            "history ends at t={last}, needs {needed_t}"
        )));
    }
    let r_cover = history.r_max();
    if r_cover < 1.0 + radius {
        return Err(Error::Coverage(format!(
            "history covers r <= {r_cover}, needs {}",
            1.0 + radius
        )));
    }
    Ok(())
}

/// Trapezoidal `∫∫ integrand(t, r, u_ℓ(t, r)) dμ(r) dt` over the stored history,
/// restricted to `t ≤ R²`.
fn space_time_integral<F>(history: &SolutionHistory, radius: f64, component: usize, f: F) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    let measure = RadialMeasure::new(history.dim);
    let dr = history.grid.dr;
    let nodes = ((radius / dr).ceil() as usize + 2).min(history.stored_nodes());
    let t_cap = radius * radius;
    let mut slabs = Vec::with_capacity(history.times.len());
    let mut row = vec![0.0; nodes];
    for (snap, &t) in history.times.iter().enumerate() {
        let u = &history.u[snap][component];
        for (j, slot) in row.iter_mut().enumerate() {
            let r = 1.0 + j as f64 * dr;
            *slot = f(t, r, u[j]);
        }
        slabs.push((t, measure.trapezoid(&row, dr)));
        if t >= t_cap {
            break;
        }
    }
    slabs
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum()
}

/// `∫∫ |u_ℓ|^{power} Ψ φ_R` (or with `φ*_R`).
pub fn functional_ir(
    history: &SolutionHistory,
    radius: f64,
    component: usize,
    which: Weighting,
    power: f64,
    weight: &HarmonicWeight,
    cutoff_lambda: f64,
) -> Result<FunctionalValue> {
    if component >= history.components() {
        return Err(Error::OutOfRange {
            what: "component",
            detail: format!("{component} >= {}", history.components()),
        });
    }
    check_coverage(history, radius)?;
    let cutoff = ScaledCutoff::new(radius, cutoff_lambda)?;
    let value = space_time_integral(history, radius, component, |t, r, u| {
        let c = match which {
            Weighting::Full => cutoff.value(t, r),
            Weighting::Star => cutoff.value_star(t, r),
        };
        if c == 0.0 {
            0.0
        } else {
            u.abs().powf(power) * weight.value_extended(r) * c
        }
    });
    Ok(FunctionalValue {
        value,
        radius,
        component,
        which,
    })
}

/// `∫∫ u (∂_t²Φ_R - ΔΦ_R - ∂_tΦ_R)` with `Φ_R = Ψ φ_R`: the right side of the
/// weak identity tested against `Φ_R`.
pub fn weak_pairing(
    history: &SolutionHistory,
    radius: f64,
    component: usize,
    weight: &HarmonicWeight,
    cutoff_lambda: f64,
) -> Result<f64> {
    check_coverage(history, radius)?;
    let cutoff = ScaledCutoff::new(radius, cutoff_lambda)?;
    let d = history.dim;
    Ok(space_time_integral(
        history,
        radius,
        component,
        |t, r, u| {
            let c = cutoff.derivatives(t, r, d);
            if c.phi == 0.0 && c.dt == 0.0 {
                return 0.0;
            }
            let psi = weight.value_extended(r);
            let lap = psi * c.laplacian + 2.0 * weight.derivative_extended(r) * c.dr;
            u * (psi * c.dtt - lap - psi * c.dt)
        },
    ))
}

/// One link of the Hölder chain for the equation of component `m` (0-based):
/// `I_R[u_{m-1}] + C⁰_m ε ≲ Θ_{p_{m+1}}(R) (∫|u_m|^{p_{m+1}} Ψ φ*_R)^{1/p_{m+1}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub equation: usize,
    pub nonlinear: f64,
    pub data_term: f64,
    pub left: f64,
    pub star_integral: f64,
    pub right: f64,
    /// Measured hidden constant `left / right`; `None` when the right side is 0.
    pub ratio: Option<f64>,
    /// `∫∫ u_m (∂_t²Φ - ΔΦ - ∂_tΦ)`, equal to `left` for an exact weak solution.
    pub weak_pairing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainRow {
    pub radius: f64,
    /// `R² ≤ t_final`: the test function fits inside the existence interval.
    pub within_lifespan: bool,
    pub links: Vec<ChainLink>,
    /// Measured constant of the composed chain
    /// `I_R + C⁰_k ε ≲ R^{e} I_R^{1/∏p}` for the last equation.
    pub composed_ratio: Option<f64>,
    /// `C⁰_k ε R^{2γ_max - d}`, bounded in `R` by the chain's conclusion.
    pub final_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub epsilon: f64,
    pub lambda: f64,
    pub gamma_max: f64,
    pub rows: Vec<ChainRow>,
}

pub struct ChainInputs<'a> {
    pub history: &'a SolutionHistory,
    pub p: &'a ExponentVector,
    pub bc: BoundaryCondition,
    pub radii: &'a [f64],
    pub epsilon: f64,
    /// Data constants `C⁰_ℓ`, one per equation.
    pub data_constants: &'a [f64],
    pub lambda: f64,
}

/// Evaluates both sides of every chain link on a finished run; diagnostic only.
pub fn chain_check(inputs: &ChainInputs<'_>) -> Result<ChainReport> {
    let history = inputs.history;
    let p = inputs.p;
    let k = p.len();
    let d = history.dim;
    if inputs.data_constants.len() != k || history.components() != k {
        return Err(Error::OutOfRange {
            what: "chain inputs",
            detail: format!(
                "need {k} data constants and components, got {} and {}",
                inputs.data_constants.len(),
                history.components()
            ),
        });
    }
    let weight = HarmonicWeight::new(d, inputs.bc)?;
    let gamma = compute_gamma(p, d)?;
    // e = -2 Σ_j 1/(p_1⋯p_j) + d (1 - 1/∏p)
    let mut partial = 1.0;
    let mut harmonic = 0.0;
    for &pj in p.as_slice() {
        partial *= pj;
        harmonic += 1.0 / partial;
    }
    let composed_exponent = -2.0 * harmonic + f64::from(d) * (1.0 - 1.0 / partial);
    let mut rows = Vec::with_capacity(inputs.radii.len());
    for &radius in inputs.radii {
        let mut links = Vec::with_capacity(k);
        for m in 0..k {
            let forcing = (m + k - 1) % k;
            let p_m = p.as_slice()[m];
            let p_next = p.as_slice()[(m + 1) % k];
            let nonlinear = functional_ir(
                history,
                radius,
                forcing,
                Weighting::Full,
                p_m,
                &weight,
                inputs.lambda,
            )?
            .value;
            let star = functional_ir(
                history,
                radius,
                m,
                Weighting::Star,
                p_next,
                &weight,
                inputs.lambda,
            )?
            .value;
            let data_term = inputs.data_constants[m] * inputs.epsilon;
            let left = nonlinear + data_term;
            let right = theta(radius, d, &inputs.bc, p_next)? * star.powf(1.0 / p_next);
            let ratio = (right > 0.0).then(|| left / right);
            let pairing = weak_pairing(history, radius, m, &weight, inputs.lambda)?;
            links.push(ChainLink {
                equation: m,
                nonlinear,
                data_term,
                left,
                star_integral: star,
                right,
                ratio,
                weak_pairing: pairing,
            });
        }
        let last = &links[k - 1];
        let right = radius.powf(composed_exponent) * last.nonlinear.powf(1.0 / p.product());
        rows.push(ChainRow {
            radius,
            within_lifespan: radius * radius <= history.t_final,
            composed_ratio: (right > 0.0).then(|| last.left / right),
            final_ratio: last.data_term * radius.powf(2.0 * gamma.gamma_max - f64::from(d)),
            links,
        });
    }
    Ok(ChainReport {
        epsilon: inputs.epsilon,
        lambda: inputs.lambda,
        gamma_max: gamma.gamma_max,
        rows,
    })
}
