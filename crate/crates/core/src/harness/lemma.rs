//! Batch verification of the cutoff derivative estimates across `R`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exponents::BoundaryCondition;
use crate::testfn::{cutoff_sup_ratios, EstimateForms, SampleViolation, SamplingSpec};

pub const DEFAULT_BAND: f64 = 4.0;

/// `λ` together with the smallest power it is meant to serve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaChoice {
    pub p_min: f64,
    pub lambda: f64,
}

impl LambdaChoice {
    /// The admissibility floor `λ = 2/(p_min − 1)`.
    pub fn floor(p_min: f64) -> Self {
        Self {
            p_min,
            lambda: 2.0 / (p_min - 1.0),
        }
    }

    pub fn below_floor(&self) -> bool {
        self.lambda < 2.0 / (self.p_min - 1.0) * (1.0 - 1e-12)
    }
}

/// Replaces estimate (i)'s `R^{-2}` by `R^{-3}`; must be caught.
pub fn mutation_r3(mut f: EstimateForms) -> EstimateForms {
    f.r_decay[0] = 3.0;
    f
}

/// Weakens estimate (i)'s cutoff power to `λ/(λ+2)`; not detectable since
/// `φ* ≤ 1` only enlarges the right side.
pub fn mutation_weak_star(mut f: EstimateForms) -> EstimateForms {
    f.star_exponent[0] = f.star_exponent[1];
    f
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaBatchSpec {
    pub radii: Vec<f64>,
    pub lambdas: Vec<LambdaChoice>,
    pub dims: Vec<u32>,
    pub bcs: Vec<BoundaryCondition>,
    pub sampling: SamplingSpec,
    pub band: f64,
    #[serde(skip)]
    pub adjust: Option<fn(EstimateForms) -> EstimateForms>,
}

impl Default for LemmaBatchSpec {
    fn default() -> Self {
        Self {
            radii: vec![4.0, 8.0, 16.0, 32.0],
            lambdas: vec![LambdaChoice::floor(1.4), LambdaChoice::floor(2.0)],
            dims: vec![2, 3],
            bcs: vec![
                BoundaryCondition::dirichlet(),
                BoundaryCondition::neumann(),
                BoundaryCondition {
                    alpha: 1.0,
                    beta: 1.0,
                },
            ],
            sampling: SamplingSpec::default(),
            band: DEFAULT_BAND,
            adjust: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaRow {
    pub dim: u32,
    pub bc: BoundaryCondition,
    pub lambda: LambdaChoice,
    /// Sup-ratios of estimates (i)–(iv), one entry per radius.
    pub ratios: Vec<[f64; 4]>,
    /// `max/min` over radii for each estimate.
    pub band: [f64; 4],
    /// Ratio at the largest radius over the smallest.
    pub growth: [f64; 4],
    pub violations: Vec<SampleViolation>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaBatchReport {
    pub radii: Vec<f64>,
    pub rows: Vec<LemmaRow>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl LemmaBatchReport {
    /// First offending sample, for reporting.
    pub fn first_violation(&self) -> Option<(&LemmaRow, &SampleViolation)> {
        self.rows
            .iter()
            .find_map(|row| row.violations.first().map(|v| (row, v)))
    }
}

fn spread(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = values.clone().fold(0.0, f64::max);
    let lo = values.fold(f64::INFINITY, f64::min);
    if hi == 0.0 {
        1.0
    } else if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

pub fn verify_lemma_batch(spec: &LemmaBatchSpec) -> Result<LemmaBatchReport> {
    let warnings: Vec<String> = spec
        .lambdas
        .iter()
        .filter(|c| c.below_floor())
        .map(|c| {
            let msg = format!(
                "lambda = {} is below the admissibility floor 2/(p_min - 1) = {} for p_min = {}",
                c.lambda,
                2.0 / (c.p_min - 1.0),
                c.p_min
            );
            log::warn!("{msg}");
            msg
        })
        .collect();

    let mut jobs = Vec::new();
    for &dim in &spec.dims {
        for bc in &spec.bcs {
            for choice in &spec.lambdas {
                jobs.push((dim, *bc, *choice));
            }
        }
    }
    let rows = jobs
        .into_par_iter()
        .map(|(dim, bc, choice)| -> Result<LemmaRow> {
            let mut sampling = spec.sampling;
            if let Some(adjust) = spec.adjust {
                sampling.forms = Some(adjust(EstimateForms::standard(choice.lambda)));
            }
            let mut ratios = Vec::with_capacity(spec.radii.len());
            let mut violations = Vec::new();
            for &radius in &spec.radii {
                let r = cutoff_sup_ratios(radius, choice.lambda, dim, &bc, &sampling)?;
                ratios.push(r.ratios);
                violations.extend(r.violations);
            }
            let band: [f64; 4] = std::array::from_fn(|e| spread(ratios.iter().map(move |r| r[e])));
            let growth: [f64; 4] = std::array::from_fn(|e| match (ratios.first(), ratios.last()) {
                (Some(a), Some(b)) if a[e] > 0.0 => b[e] / a[e],
                _ => 1.0,
            });
            let pass = violations.is_empty() && band.iter().all(|&b| b <= spec.band);
            Ok(LemmaRow {
                dim,
                bc,
                lambda: choice,
                ratios,
                band,
                growth,
                violations,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
    Ok(LemmaBatchReport {
        radii: spec.radii.clone(),
        rows,
        warnings,
        pass,
    })
}
