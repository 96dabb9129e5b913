//! Harmonic weights and space-time cutoffs used by the test-function method.
//!
//! The cutoff `φ` is flat (`= 1`) on `[0, 1/2]`, vanishes on `[1, ∞)` and
//! crosses over through the `C^∞` bridge
//! `g(s) = f(1-s) / (f(s) + f(1-s))`, `f(s) = e^{-1/s}`, with `s = 2ρ - 1`.
//! Writing `g = 1 / (1 + e^{q})`, `q(s) = 1/(1-s) - 1/s`, gives derivatives
//! that stay finite where `f` underflows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::BoundaryCondition;

/// Harmonic function on `|x| > 1` satisfying the boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicWeight {
    pub dim: u32,
    pub bc: BoundaryCondition,
}

impl HarmonicWeight {
    pub fn new(dim: u32, bc: BoundaryCondition) -> Result<Self> {
        if dim == 0 {
            return Err(Error::OutOfRange {
                what: "dimension",
                detail: "d must be >= 1".into(),
            });
        }
        BoundaryCondition::new(bc.alpha, bc.beta)?;
        Ok(Self { dim, bc })
    }

    fn check(r: f64) -> Result<()> {
        if r >= 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "r = {r} < 1 is outside the exterior domain"
            )))
        }
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Self::check(r)?;
        Ok(self.value_extended(r))
    }

    /// `Ψ'(r)`.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        Self::check(r)?;
        Ok(self.derivative_extended(r))
    }

    /// `Ψ''(r)`.
    pub fn second_derivative(&self, r: f64) -> Result<f64> {
        Self::check(r)?;
        Ok(self.second_derivative_extended(r))
    }

    /// `|∇Ψ|`, which for a radial function is `|Ψ'(r)|`.
    pub fn gradient_magnitude(&self, r: f64) -> Result<f64> {
        Ok(self.derivative(r)?.abs())
    }

    /// `Ψ'' + (d-1)/r Ψ'` from the analytic derivatives.
    pub fn radial_laplacian(&self, r: f64) -> Result<f64> {
        Self::check(r)?;
        Ok(self.second_derivative_extended(r)
            + f64::from(self.dim - 1) / r * self.derivative_extended(r))
    }

    /// `α(-Ψ'(1)) + βΨ(1)`; zero for every admissible weight.
    pub fn boundary_residual(&self) -> f64 {
        self.bc.alpha * (-self.derivative_extended(1.0)) + self.bc.beta * self.value_extended(1.0)
    }

    // The closed forms also make sense for 0 < r < 1 (ghost-node checks).
    pub(crate) fn value_extended(&self, r: f64) -> f64 {
        let BoundaryCondition { alpha, beta } = self.bc;
        if beta == 0.0 {
            return 1.0;
        }
        let ratio = alpha / beta;
        match self.dim {
            1 => r - 1.0 + ratio,
            2 => r.ln() + ratio,
            d => {
                let d = f64::from(d);
                1.0 - r.powf(2.0 - d) + ratio * (d - 2.0)
            }
        }
    }

    pub(crate) fn derivative_extended(&self, r: f64) -> f64 {
        if self.bc.beta == 0.0 {
            return 0.0;
        }
        match self.dim {
            1 => 1.0,
            2 => 1.0 / r,
            d => {
                let d = f64::from(d);
                (d - 2.0) * r.powf(1.0 - d)
            }
        }
    }

    pub(crate) fn second_derivative_extended(&self, r: f64) -> f64 {
        if self.bc.beta == 0.0 {
            return 0.0;
        }
        match self.dim {
            1 => 0.0,
            2 => -1.0 / (r * r),
            d => {
                let d = f64::from(d);
                -(d - 2.0) * (d - 1.0) * r.powf(-d)
            }
        }
    }
}

pub fn psi(r: f64, d: u32, bc: &BoundaryCondition) -> Result<f64> {
    HarmonicWeight::new(d, *bc)?.value(r)
}

pub fn psi_gradient_magnitude(r: f64, d: u32, bc: &BoundaryCondition) -> Result<f64> {
    HarmonicWeight::new(d, *bc)?.gradient_magnitude(r)
}

/// Bridge value and first two derivatives `(g, g', g'')` at `s`.
pub fn bridge(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let inv_s = 1.0 / s;
    let inv_c = 1.0 / (1.0 - s);
    let q = inv_c - inv_s;
    // g = σ(-q), 1 - g = σ(q), evaluated without cancellation.
    let (g, one_minus_g) = if q >= 0.0 {
        let e = (-q).exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    } else {
        let e = q.exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    };
    let dq = inv_c * inv_c + inv_s * inv_s;
    let ddq = 2.0 * inv_c * inv_c * inv_c - 2.0 * inv_s * inv_s * inv_s;
    let w = g * one_minus_g;
    let dg = -w * dq;
    let ddg = -ddq * w - dq * dg * (one_minus_g - g);
    (g, dg, ddg)
}

/// `(φ(ρ), φ'(ρ), φ''(ρ))`, or the starred profile when `star` is set.
pub fn cutoff_profile(rho: f64, star: bool) -> (f64, f64, f64) {
    if star && rho < 0.5 {
        return (0.0, 0.0, 0.0);
    }
    let (g, dg, ddg) = bridge(2.0 * rho - 1.0);
    (g, 2.0 * dg, 4.0 * ddg)
}

pub fn cutoff_value(rho: f64, star: bool) -> f64 {
    cutoff_profile(rho, star).0
}

/// Values of the scaled cutoff `φ_R = φ(ρ)^{λ+2}` and its derivatives at one
/// point, `ρ = (t² + (r-1)⁴)/R⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffDerivatives {
    pub phi: f64,
    pub dt: f64,
    pub dtt: f64,
    /// `∂_r φ_R` (signed).
    pub dr: f64,
    /// `∂_r² φ_R + (d-1)/r ∂_r φ_R`.
    pub laplacian: f64,
    pub grad_abs: f64,
}

impl CutoffDerivatives {
    const ZERO: Self = Self {
        phi: 0.0,
        dt: 0.0,
        dtt: 0.0,
        dr: 0.0,
        laplacian: 0.0,
        grad_abs: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCutoff {
    pub radius: f64,
    pub lambda: f64,
}

impl ScaledCutoff {
    pub fn new(radius: f64, lambda: f64) -> Result<Self> {
        if !(radius > 0.0) || !(lambda > 0.0) {
            return Err(Error::OutOfRange {
                what: "cutoff parameters",
                detail: format!("need R > 0 and lambda > 0, got R={radius}, lambda={lambda}"),
            });
        }
        Ok(Self { radius, lambda })
    }

    pub fn rho(&self, t: f64, r: f64) -> f64 {
        let x = r - 1.0;
        (t * t + x * x * x * x) / self.radius.powi(4)
    }

    pub fn value(&self, t: f64, r: f64) -> f64 {
        cutoff_value(self.rho(t, r), false).powf(self.lambda + 2.0)
    }

    pub fn value_star(&self, t: f64, r: f64) -> f64 {
        cutoff_value(self.rho(t, r), true).powf(self.lambda + 2.0)
    }

    /// Chain-rule derivatives in radial variables for dimension `d`.
    pub fn derivatives(&self, t: f64, r: f64, d: u32) -> CutoffDerivatives {
        let rho = self.rho(t, r);
        if rho >= 1.0 {
            return CutoffDerivatives::ZERO;
        }
        let (f, df, ddf) = cutoff_profile(rho, false);
        let m = self.lambda + 2.0;
        let f_m1 = f.powf(self.lambda + 1.0);
        let phi = f_m1 * f;
        // F(ρ) = φ^{λ+2}: F' and F''.
        let d1 = m * f_m1 * df;
        let d2 = m * (self.lambda + 1.0) * f.powf(self.lambda) * df * df + m * f_m1 * ddf;

        let r4 = self.radius.powi(4);
        let x = r - 1.0;
        let rho_t = 2.0 * t / r4;
        let rho_tt = 2.0 / r4;
        let rho_r = 4.0 * x * x * x / r4;
        let rho_rr = 12.0 * x * x / r4;

        let dt = d1 * rho_t;
        let dtt = d2 * rho_t * rho_t + d1 * rho_tt;
        let dr = d1 * rho_r;
        let drr = d2 * rho_r * rho_r + d1 * rho_rr;
        let laplacian = drr + f64::from(d - 1) / r * dr;
        CutoffDerivatives {
            phi,
            dt,
            dtt,
            dr,
            laplacian,
            grad_abs: dr.abs(),
        }
    }
}

pub fn phi_r_derivatives(
    t: f64,
    r: f64,
    radius: f64,
    lambda: f64,
    d: u32,
) -> Result<CutoffDerivatives> {
    if r < 1.0 {
        return Err(Error::Domain(format!("r = {r} < 1")));
    }
    Ok(ScaledCutoff::new(radius, lambda)?.derivatives(t, r, d))
}

/// Right-hand sides `C R^{-a} Ψ^{w} (φ*_R)^{e}` of the four derivative
/// estimates; [`EstimateForms::standard`] gives the proven ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateForms {
    pub r_decay: [f64; 4],
    pub star_exponent: [f64; 4],
}

impl EstimateForms {
    pub fn standard(lambda: f64) -> Self {
        let m = lambda + 2.0;
        Self {
            r_decay: [2.0, 4.0, 2.0, 2.0],
            star_exponent: [(lambda + 1.0) / m, lambda / m, lambda / m, lambda / m],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingSpec {
    pub nt: usize,
    pub nr: usize,
    pub forms: Option<EstimateForms>,
    /// Ratios above the cap are reported as violations.
    pub cap: f64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            nt: 512,
            nr: 512,
            forms: None,
            cap: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleViolation {
    pub estimate: usize,
    pub t: f64,
    pub r: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRatios {
    pub radius: f64,
    pub lambda: f64,
    pub dim: u32,
    /// Sup over samples of `|left| / right` for estimates (i)–(iv).
    pub ratios: [f64; 4],
    pub samples: usize,
    pub skipped: usize,
    pub violations: Vec<SampleViolation>,
}

impl LemmaRatios {
    pub fn into_result(self) -> Result<Self> {
        match self.violations.first() {
            None => Ok(self),
            Some(v) => Err(Error::Violation(format!(
                "estimate ({}) at t={}, r={}: left={:e}, right={:e}",
                v.estimate + 1,
                v.t,
                v.r,
                v.left,
                v.right
            ))),
        }
    }
}

const TINY_RIGHT: f64 = 1e-300;
const TINY_LEFT: f64 = 1e-12;

/// Samples `Q_R` on a uniform `(t, r-1) ∈ [0, R²] × [0, R]` grid and returns the
/// sup of each estimate's left side over its right side.
pub fn cutoff_sup_ratios(
    radius: f64,
    lambda: f64,
    d: u32,
    bc: &BoundaryCondition,
    grid: &SamplingSpec,
) -> Result<LemmaRatios> {
    let cutoff = ScaledCutoff::new(radius, lambda)?;
    let weight = HarmonicWeight::new(d, *bc)?;
    let forms = grid
        .forms
        .unwrap_or_else(|| EstimateForms::standard(lambda));
    if grid.nt < 2 || grid.nr < 2 {
        return Err(Error::OutOfRange {
            what: "sampling grid",
            detail: "need at least 2x2 samples".into(),
        });
    }
    let scale: [f64; 4] = std::array::from_fn(|i| radius.powf(-forms.r_decay[i]));

    let mut ratios = [0.0f64; 4];
    let mut samples = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();

    for i in 0..grid.nt {
        let t = radius * radius * i as f64 / (grid.nt - 1) as f64;
        for j in 0..grid.nr {
            let r = 1.0 + radius * j as f64 / (grid.nr - 1) as f64;
            if cutoff.rho(t, r) >= 1.0 {
                continue;
            }
            samples += 1;
            let c = cutoff.derivatives(t, r, d);
            let star = cutoff.value_star(t, r);
            let psi = weight.value_extended(r);
            let dpsi = weight.derivative_extended(r);
            let lap_weighted = psi * c.laplacian + 2.0 * dpsi * c.dr;

            let left = [
                c.dt.abs(),
                c.dtt.abs(),
                c.laplacian.abs(),
                lap_weighted.abs(),
            ];
            let psi_factor = [1.0, 1.0, 1.0, psi];
            for e in 0..4 {
                let right = scale[e] * psi_factor[e] * star.powf(forms.star_exponent[e]);
                if right < TINY_RIGHT {
                    if left[e] < TINY_LEFT {
                        skipped += 1;
                    } else {
                        violations.push(SampleViolation {
                            estimate: e,
                            t,
                            r,
                            left: left[e],
                            right,
                        });
                    }
                    continue;
                }
                let ratio = left[e] / right;
                if ratio > grid.cap {
                    violations.push(SampleViolation {
                        estimate: e,
                        t,
                        r,
                        left: left[e],
                        right,
                    });
                }
                ratios[e] = ratios[e].max(ratio);
            }
        }
    }

    Ok(LemmaRatios {
        radius,
        lambda,
        dim: d,
        ratios,
        samples,
        skipped,
        violations,
    })
}
