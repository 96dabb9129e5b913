//! Blow-up and lifespan laboratory for weakly coupled damped wave systems
//! `∂²_t u_ℓ − Δu_ℓ + ∂_t u_ℓ = |u_{ℓ−1}|^{p_ℓ}` outside the unit ball.
//!
//! - [`exponents`]: the `γ` vector, regime classification and lifespan bounds.
//! - [`testfn`]: harmonic weights and space-time cutoffs.
//! - [`quadrature`]: measures, adaptive quadrature and space-time functionals.
//! - [`solver`]: radial finite-difference integrator with blow-up detection.
//! - [`oracle`]: ODE blow-up references.
//! - [`harness`]: sweeps, fits, lemma batches and on-disk reports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exponents;
pub mod harness;
pub mod oracle;
pub mod quadrature;
pub mod solver;
pub mod testfn;

pub use error::{Error, Result};
pub use exponents::{
    classify_regime, compute_gamma, BoundForm, BoundaryCondition, ExponentVector, GammaReport,
    LifespanBound,
};
pub use solver::{run, RunConfig, RunRecord, Verdict};
