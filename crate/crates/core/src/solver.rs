//! Radial finite-difference integrator for the damped wave system on `r > 1`.
//!
//! Each component obeys `∂²_t u_ℓ − Δu_ℓ + ∂_t u_ℓ = |u_{ℓ−1}|^{p_ℓ}` with
//! `u_0 := u_k`. Time stepping is the three-level scheme
//!
//! ```text
//! (u⁺ − 2u + u⁻)/dt² + (u⁺ − u⁻)/(2dt) = L u + F(u)
//! ```
//!
//! solved pointwise for `u⁺`. The radial Laplacian is written in flux form,
//! `L u_j = [c⁺_j (u_{j+1} − u_j) − c⁻_j (u_j − u_{j−1})] / dr²` with
//! `c^±_j = (r_{j±1/2} / r_j)^{d−1}`, which is a centered second-order
//! approximation of `u_rr + (d−1)/r u_r` and is symmetric in the weighted inner
//! product used by [`Stepper::energy`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{compute_gamma, BoundaryCondition, ExponentVector};
use crate::quadrature::RadialMeasure;
use crate::testfn::{bridge, HarmonicWeight};

pub const DEFAULT_CFL: f64 = 0.9;
pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e8;
/// Halvings of the last step used to locate the threshold crossing.
const BISECTION_LEVELS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub cells: usize,
    pub dr: f64,
}

impl RadialGrid {
    pub const MIN_CELLS: usize = 16;

    pub fn new(r_max: f64, cells: usize) -> Result<Self> {
        if !(r_max > 1.0) || !r_max.is_finite() {
            return Err(Error::Config(format!(
                "r_max = {r_max} must be finite and > 1"
            )));
        }
        if cells < Self::MIN_CELLS {
            return Err(Error::Config(format!(
                "need at least {} cells, got {cells}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self {
            r_max,
            cells,
            dr: (r_max - 1.0) / cells as f64,
        })
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn r(&self, j: usize) -> f64 {
        1.0 + j as f64 * self.dr
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.nodes()).map(|j| self.r(j)).collect()
    }
}

/// Fields at one time level, indexed `[component][node]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialState {
    pub t: f64,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

impl RadialState {
    pub fn zeros(components: usize, grid: &RadialGrid) -> Self {
        let n = grid.nodes();
        Self {
            t: 0.0,
            u: vec![vec![0.0; n]; components],
            v: vec![vec![0.0; n]; components],
        }
    }

    pub fn components(&self) -> usize {
        self.u.len()
    }

    pub fn is_finite(&self) -> bool {
        self.u
            .iter()
            .chain(&self.v)
            .flatten()
            .all(|x| x.is_finite())
    }

    pub fn max_norm(&self) -> f64 {
        max_norm(&self.u).0
    }
}

/// `(max |u|, component, node)`; NaN propagates as `+∞`.
fn max_norm(u: &[Vec<f64>]) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for (l, comp) in u.iter().enumerate() {
        for (j, &x) in comp.iter().enumerate() {
            let a = if x.is_nan() { f64::INFINITY } else { x.abs() };
            if a > best.0 {
                best = (a, l, j);
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub p: ExponentVector,
    pub dim: u32,
    pub bc: BoundaryCondition,
    /// Switches the nonlinear terms off for linear tests.
    pub forcing: bool,
}

impl SystemSpec {
    pub fn new(p: ExponentVector, dim: u32, bc: BoundaryCondition) -> Result<Self> {
        if dim == 0 {
            return Err(Error::OutOfRange {
                what: "dimension",
                detail: "d must be >= 1".into(),
            });
        }
        bc.validate_for_solver()?;
        Ok(Self {
            p,
            dim,
            bc,
            forcing: true,
        })
    }

    pub fn linear(mut self) -> Self {
        self.forcing = false;
        self
    }

    pub fn components(&self) -> usize {
        self.p.len()
    }
}

/// Ghost value `u_{−1} = u_1 − 2 dr (β/α) u_0` imposing `∂_r u(1) = (β/α) u(1)`.
pub fn ghost_node(u0: f64, u1: f64, dr: f64, bc: &BoundaryCondition) -> f64 {
    u1 - 2.0 * dr * bc.radial_slope() * u0
}

/// Imposes the strong part of the boundary condition: `u(1) = 0` for Dirichlet
/// data and `u(r_max) = 0` always. Other kinds act through [`ghost_node`].
pub fn apply_boundary(state: &mut RadialState, bc: &BoundaryCondition) -> Result<()> {
    let bc = BoundaryCondition::new(bc.alpha, bc.beta)?;
    for (u, v) in state.u.iter_mut().zip(state.v.iter_mut()) {
        if bc.alpha == 0.0 {
            u[0] = 0.0;
            v[0] = 0.0;
        }
        if let Some(last) = u.last_mut() {
            *last = 0.0;
        }
        if let Some(last) = v.last_mut() {
            *last = 0.0;
        }
    }
    Ok(())
}

/// Discrete radial Laplacian with its energy weights.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    grid: RadialGrid,
    dirichlet: bool,
    /// `2 dr (β/α)`, used by the ghost node.
    ghost_slope: f64,
    plus: Vec<f64>,
    minus: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialOperator {
    pub fn new(grid: RadialGrid, dim: u32, bc: &BoundaryCondition) -> Self {
        let n = grid.nodes();
        let dr = grid.dr;
        let e = i32::try_from(dim).unwrap_or(i32::MAX) - 1;
        let inv = 1.0 / (dr * dr);
        let mut plus = vec![0.0; n];
        let mut minus = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for j in 0..n {
            let r = grid.r(j);
            plus[j] = ((r + 0.5 * dr) / r).powi(e) * inv;
            minus[j] = ((r - 0.5 * dr) / r).powi(e) * inv;
            weights[j] = r.powi(e) * dr;
        }
        let hp = (1.0 + 0.5 * dr).powi(e);
        let hm = (1.0 - 0.5 * dr).powi(e);
        weights[0] = dr * hp / (hp + hm);
        weights[n - 1] = 0.0;
        let dirichlet = bc.alpha == 0.0;
        if dirichlet {
            weights[0] = 0.0;
        }
        Self {
            grid,
            dirichlet,
            ghost_slope: if dirichlet {
                0.0
            } else {
                2.0 * dr * bc.radial_slope()
            },
            plus,
            minus,
            weights,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Writes `L u` into `out`; entries at held nodes are set to zero.
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.grid.nodes();
        out[n - 1] = 0.0;
        if self.dirichlet {
            out[0] = 0.0;
        } else {
            let ghost = u[1] - self.ghost_slope * u[0];
            out[0] = self.plus[0] * (u[1] - u[0]) - self.minus[0] * (u[0] - ghost);
        }
        for j in 1..n - 1 {
            out[j] = self.plus[j] * (u[j + 1] - u[j]) - self.minus[j] * (u[j] - u[j - 1]);
        }
    }

    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(a)
            .zip(b)
            .map(|((w, x), y)| w * x * y)
            .sum()
    }
}

/// External source `S(component, t, r)` added to the right-hand side.
pub type Source = Arc<dyn Fn(usize, f64, f64) -> f64 + Send + Sync>;

/// Three-level time stepper holding `u^{n−1}` and `u^n`.
#[derive(Clone)]
pub struct Stepper {
    spec: SystemSpec,
    op: RadialOperator,
    dt: f64,
    t: f64,
    prev: Vec<Vec<f64>>,
    cur: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    source: Option<Source>,
}

impl Stepper {
    pub fn new(spec: &SystemSpec, grid: RadialGrid, dt: f64, cfl: f64) -> Result<Self> {
        let limit = cfl * grid.dr;
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        let k = spec.components();
        let n = grid.nodes();
        Ok(Self {
            spec: spec.clone(),
            op: RadialOperator::new(grid, spec.dim, &spec.bc),
            dt,
            t: 0.0,
            prev: vec![vec![0.0; n]; k],
            cur: vec![vec![0.0; n]; k],
            rhs: vec![0.0; n],
            source: None,
        })
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = Some(source);
        self
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn current(&self) -> &[Vec<f64>] {
        &self.cur
    }

    pub fn previous(&self) -> &[Vec<f64>] {
        &self.prev
    }

    pub fn operator(&self) -> &RadialOperator {
        &self.op
    }

    /// `L u_ℓ + |u_{ℓ−1}|^{p_ℓ} + S_ℓ` at time `t` into `self.rhs`.
    fn assemble(&mut self, fields: &[Vec<f64>], l: usize, t: f64) {
        self.op.apply(&fields[l], &mut self.rhs);
        let n = self.rhs.len();
        if self.spec.forcing {
            let k = fields.len();
            let src = &fields[(l + k - 1) % k];
            let p = self.spec.p.as_slice()[l];
            for (out, x) in self.rhs[..n - 1].iter_mut().zip(src) {
                let a = x.abs();
                if a != 0.0 {
                    *out += a.powf(p);
                }
            }
        }
        if let Some(s) = &self.source {
            for j in 0..n - 1 {
                self.rhs[j] += s(l, t, self.op.grid.r(j));
            }
        }
        self.rhs[n - 1] = 0.0;
        if self.op.dirichlet {
            self.rhs[0] = 0.0;
        }
    }

    /// Loads `(u⁰, v⁰)` and takes the Taylor start step to `t⁰ + dt`.
    pub fn start(&mut self, state: &RadialState) -> Result<()> {
        if !state.is_finite() {
            return Err(Error::NonFinite { t: state.t });
        }
        let k = self.spec.components();
        if state.components() != k || state.u.iter().any(|c| c.len() != self.rhs.len()) {
            return Err(Error::Config(
                "state shape does not match grid and system".into(),
            ));
        }
        let dt = self.dt;
        let mut next = state.u.clone();
        for (l, field) in next.iter_mut().enumerate() {
            self.assemble(&state.u, l, state.t);
            for (j, x) in field.iter_mut().enumerate() {
                let v = state.v[l][j];
                *x += dt * v + 0.5 * dt * dt * (self.rhs[j] - v);
            }
        }
        self.hold(&mut next);
        self.prev = state.u.clone();
        self.hold_prev();
        self.cur = next;
        self.t = state.t + dt;
        Ok(())
    }

    fn hold(&self, fields: &mut [Vec<f64>]) {
        for u in fields {
            if self.op.dirichlet {
                u[0] = 0.0;
            }
            if let Some(last) = u.last_mut() {
                *last = 0.0;
            }
        }
    }

    fn hold_prev(&mut self) {
        let mut prev = std::mem::take(&mut self.prev);
        self.hold(&mut prev);
        self.prev = prev;
    }

    /// One step of the three-level scheme.
    pub fn advance(&mut self) {
        let dt = self.dt;
        let a = 1.0 - 0.5 * dt;
        let b = 1.0 / (1.0 + 0.5 * dt);
        let k = self.spec.components();
        let mut next = std::mem::take(&mut self.prev);
        let cur = std::mem::take(&mut self.cur);
        for l in 0..k {
            self.assemble(&cur, l, self.t);
            let (u, rhs) = (&cur[l], &self.rhs);
            for (j, x) in next[l].iter_mut().enumerate() {
                *x = (2.0 * u[j] - a * *x + dt * dt * rhs[j]) * b;
            }
        }
        self.hold(&mut next);
        self.prev = cur;
        self.cur = next;
        self.t += dt;
    }

    /// `E^{n+1/2} = ½|δu/dt|²_W + ½⟨−L u^{n+1}, u^n⟩_W` for the last two
    /// levels, summed over components. Non-increasing when forcing is off.
    pub fn energy(&self) -> f64 {
        let n = self.rhs.len();
        let mut lu = vec![0.0; n];
        let mut total = 0.0;
        for (cur, prev) in self.cur.iter().zip(&self.prev) {
            let vel: Vec<f64> = cur
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b) / self.dt)
                .collect();
            self.op.apply(cur, &mut lu);
            total += 0.5 * self.op.inner(&vel, &vel) - 0.5 * self.op.inner(&lu, prev);
        }
        total
    }
}

/// Radial bump `g(|r − c| / w)` built from the cutoff bridge, with its first
/// two radial derivatives.
pub fn bump(r: f64, center: f64, width: f64) -> (f64, f64, f64) {
    let s = (r - center).abs() / width;
    let (g, dg, ddg) = bridge(s);
    let sign = if r >= center { 1.0 } else { -1.0 };
    (g, sign * dg / width, ddg / (width * width))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub center: f64,
    pub width: f64,
    pub u0_amplitude: f64,
    pub u1_amplitude: f64,
    pub epsilon: f64,
}

impl InitialData {
    pub fn bump(epsilon: f64) -> Self {
        Self {
            center: 2.0,
            width: 0.5,
            u0_amplitude: 1.0,
            u1_amplitude: 1.0,
            epsilon,
        }
    }

    pub fn validate(&self, grid: &RadialGrid) -> Result<()> {
        if !(self.width > 0.0) || !(self.center - self.width > 1.0) {
            return Err(Error::Config(format!(
                "bump support [{}, {}] must lie in r > 1",
                self.center - self.width,
                self.center + self.width
            )));
        }
        if self.center + self.width >= grid.r_max {
            return Err(Error::Config(format!(
                "bump support reaches r_max = {}",
                grid.r_max
            )));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!(
                "epsilon = {} must be >= 0",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Unscaled `(u₀(r), u₁(r))`.
    pub fn profile(&self, r: f64) -> (f64, f64) {
        let g = bump(r, self.center, self.width).0;
        (self.u0_amplitude * g, self.u1_amplitude * g)
    }

    /// `ε (u₀, u₁)` on the grid, identical for every component.
    pub fn state(&self, grid: &RadialGrid, components: usize) -> RadialState {
        let mut state = RadialState::zeros(components, grid);
        for j in 0..grid.nodes() {
            let (a, b) = self.profile(grid.r(j));
            for l in 0..components {
                state.u[l][j] = self.epsilon * a;
                state.v[l][j] = self.epsilon * b;
            }
        }
        state
    }
}

/// `ω_{d−1} ∫ (u₀ + u₁) Ψ r^{d−1} dr` on the grid for the unscaled profile.
pub fn validate_data_positivity(
    data: &InitialData,
    grid: &RadialGrid,
    d: u32,
    bc: &BoundaryCondition,
) -> Result<f64> {
    let weight = HarmonicWeight::new(d, *bc)?;
    let values: Vec<f64> = grid
        .positions()
        .into_iter()
        .map(|r| {
            let (a, b) = data.profile(r);
            (a + b) * weight.value_extended(r)
        })
        .collect();
    let value = RadialMeasure::new(d).trapezoid(&values, grid.dr);
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::DataPositivity { value })
    }
}

fn default_true() -> bool {
    true
}
fn default_cfl() -> f64 {
    DEFAULT_CFL
}
fn default_threshold() -> f64 {
    DEFAULT_BLOWUP_THRESHOLD
}
fn default_center() -> f64 {
    2.0
}
fn default_width() -> f64 {
    0.5
}
fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub p: Vec<f64>,
    pub dim: u32,
    #[serde(default = "default_true")]
    pub forcing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub cells: usize,
    /// Defaults to the domain-of-dependence size `c + w + T_end + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Defaults to `cfl * dr`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Keep every n-th level in the solution history; off when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history_stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history_r_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSection {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for BcSection {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub epsilon: f64,
    #[serde(default = "default_center")]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_one")]
    pub u0_amplitude: f64,
    #[serde(default = "default_one")]
    pub u1_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    #[serde(default = "default_threshold")]
    pub blowup: f64,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self {
            blowup: DEFAULT_BLOWUP_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub grid: GridSection,
    pub time: TimeSection,
    #[serde(default)]
    pub bc: BcSection,
    pub data: DataSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
}

impl RunConfig {
    /// Dirichlet bump run with default shape and auto-sized grid.
    pub fn new(p: &[f64], dim: u32, cells: usize, t_end: f64, epsilon: f64) -> Self {
        Self {
            system: SystemSection {
                p: p.to_vec(),
                dim,
                forcing: true,
            },
            grid: GridSection { cells, r_max: None },
            time: TimeSection {
                t_end,
                cfl: DEFAULT_CFL,
                dt: None,
                history_stride: None,
                history_r_max: None,
            },
            bc: BcSection::default(),
            data: DataSection {
                epsilon,
                center: default_center(),
                width: default_width(),
                u0_amplitude: 1.0,
                u1_amplitude: 1.0,
            },
            thresholds: ThresholdSection::default(),
        }
    }

    pub fn exponents(&self) -> Result<ExponentVector> {
        ExponentVector::new(self.system.p.clone())
    }

    pub fn boundary(&self) -> Result<BoundaryCondition> {
        let bc = BoundaryCondition::new(self.bc.alpha, self.bc.beta)?;
        bc.validate_for_solver()?;
        Ok(bc)
    }

    pub fn initial_data(&self) -> InitialData {
        InitialData {
            center: self.data.center,
            width: self.data.width,
            u0_amplitude: self.data.u0_amplitude,
            u1_amplitude: self.data.u1_amplitude,
            epsilon: self.data.epsilon,
        }
    }

    /// Smallest outer radius free of boundary reflections up to `t_end`.
    pub fn dependence_radius(&self) -> f64 {
        self.data.center + self.data.width + self.time.t_end
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        let r_max = self.grid.r_max.unwrap_or(self.dependence_radius() + 1.0);
        RadialGrid::new(r_max, self.grid.cells)
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let mut spec = SystemSpec::new(self.exponents()?, self.system.dim, self.boundary()?)?;
        spec.forcing = self.system.forcing;
        Ok(spec)
    }

    pub fn dt(&self, grid: &RadialGrid) -> f64 {
        self.time.dt.unwrap_or(self.time.cfl * grid.dr)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.system()?;
        if !(self.time.t_end > 0.0) || !self.time.t_end.is_finite() {
            return Err(Error::Config(format!(
                "t_end = {} must be finite and > 0",
                self.time.t_end
            )));
        }
        if !(self.time.cfl > 0.0 && self.time.cfl <= 1.0) {
            return Err(Error::Config(format!(
                "cfl = {} must lie in (0, 1]",
                self.time.cfl
            )));
        }
        if grid.r_max < self.dependence_radius() {
            return Err(Error::Config(format!(
                "r_max = {} < c + w + t_end = {}: the outer boundary would be reached",
                grid.r_max,
                self.dependence_radius()
            )));
        }
        if !(self.thresholds.blowup >= 1.0) {
            return Err(Error::Config(format!(
                "blow-up threshold {} must be >= 1",
                self.thresholds.blowup
            )));
        }
        if self.time.history_stride == Some(0) {
            return Err(Error::Config("history_stride must be >= 1".into()));
        }
        self.initial_data().validate(&grid)?;
        let dt = self.dt(&grid);
        let limit = self.time.cfl * grid.dr;
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        Ok(())
    }
}

/// Saved levels for space-time quadrature, indexed `[snapshot][component][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHistory {
    pub grid: RadialGrid,
    pub dim: u32,
    pub times: Vec<f64>,
    pub u: Vec<Vec<Vec<f64>>>,
    pub v: Vec<Vec<Vec<f64>>>,
    /// Time of the last stored level.
    pub t_final: f64,
}

impl SolutionHistory {
    fn new(grid: RadialGrid, dim: u32) -> Self {
        Self {
            grid,
            dim,
            times: Vec::new(),
            u: Vec::new(),
            v: Vec::new(),
            t_final: 0.0,
        }
    }

    fn push(&mut self, t: f64, u: &[Vec<f64>], v: Vec<Vec<f64>>, nodes: usize) {
        self.times.push(t);
        self.u.push(u.iter().map(|c| c[..nodes].to_vec()).collect());
        self.v.push(
            v.into_iter()
                .map(|mut c| {
                    c.truncate(nodes);
                    c
                })
                .collect(),
        );
        self.t_final = t;
    }

    pub fn stored_nodes(&self) -> usize {
        self.u.first().and_then(|s| s.first()).map_or(0, Vec::len)
    }

    pub fn r_max(&self) -> f64 {
        self.grid.r(self.stored_nodes().saturating_sub(1))
    }

    pub fn components(&self) -> usize {
        self.u.first().map_or(0, Vec::len)
    }

    /// CSV dump with columns `t, r, u_1…u_k, v_1…v_k`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        let k = self.components();
        let mut header = vec!["t".to_string(), "r".to_string()];
        header.extend((1..=k).map(|l| format!("u_{l}")));
        header.extend((1..=k).map(|l| format!("v_{l}")));
        w.write_record(&header)?;
        for (s, &t) in self.times.iter().enumerate() {
            for j in 0..self.stored_nodes() {
                let mut row = vec![t.to_string(), self.grid.r(j).to_string()];
                row.extend((0..k).map(|l| self.u[s][l][j].to_string()));
                row.extend((0..k).map(|l| self.v[s][l][j].to_string()));
                w.write_record(&row)?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    BlewUp { t_blow: f64 },
    SurvivedHorizon { t_end: f64 },
}

impl Verdict {
    pub fn t_blow(&self) -> Option<f64> {
        match self {
            Verdict::BlewUp { t_blow } => Some(*t_blow),
            Verdict::SurvivedHorizon { .. } => None,
        }
    }

    pub fn blew_up(&self) -> bool {
        matches!(self, Verdict::BlewUp { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakSample {
    pub t: f64,
    pub max_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub dr: f64,
    pub dt: f64,
    pub steps: usize,
    pub verdict: Verdict,
    /// Located threshold crossing; `t_blow` adds the self-similar tail to it.
    pub t_cross: Option<f64>,
    /// A non-finite value appeared before the threshold was crossed.
    pub nan_flag: bool,
    pub positivity: f64,
    pub peak_history: Vec<PeakSample>,
    #[serde(skip)]
    pub history: Option<SolutionHistory>,
}

fn crossed(u: &[Vec<f64>], threshold: f64) -> bool {
    max_norm(u).0 > threshold
}

fn central_velocity(next: &[Vec<f64>], prev: &[Vec<f64>], dt: f64) -> Vec<Vec<f64>> {
    next.iter()
        .zip(prev)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) / (2.0 * dt)).collect())
        .collect()
}

/// Bisects `[state.t, state.t + width]` for the first time `max|u| > M`,
/// restarting sub-integrations from the left end. Returns the last state
/// below the threshold and the final bracket width.
fn bisect_crossing(
    spec: &SystemSpec,
    grid: RadialGrid,
    cfl: f64,
    mut left: RadialState,
    mut width: f64,
    threshold: f64,
) -> Result<(RadialState, f64)> {
    for _ in 0..BISECTION_LEVELS {
        let h = 0.5 * width;
        let mut sub = Stepper::new(spec, grid, h, cfl)?;
        sub.start(&left)?;
        let mid = sub.current().to_vec();
        if crossed(&mid, threshold) {
            width = h;
            continue;
        }
        sub.advance();
        let v = central_velocity(sub.current(), &left.u, h);
        left = RadialState {
            t: left.t + h,
            u: mid,
            v,
        };
        width = h;
    }
    Ok((left, width))
}

/// Adds the self-similar tail `2γ_ℓ |u| / ∂_t|u|` at the peak node.
fn tail_estimate(state: &RadialState, gamma: &[f64]) -> f64 {
    let (norm, l, j) = max_norm(&state.u);
    let rate = state.v[l][j] * state.u[l][j].signum();
    if norm > 0.0 && rate > 0.0 && norm.is_finite() {
        2.0 * gamma[l] * norm / rate
    } else {
        0.0
    }
}

/// Integrates until the threshold is crossed or `t_end` is reached.
pub fn run(config: &RunConfig) -> Result<RunRecord> {
    config.validate()?;
    let grid = config.grid()?;
    let spec = config.system()?;
    let data = config.initial_data();
    let positivity = validate_data_positivity(&data, &grid, spec.dim, &spec.bc)?;
    let gamma = compute_gamma(&spec.p, spec.dim)?.gamma;
    let dt = config.dt(&grid);
    let cfl = config.time.cfl;
    let t_end = config.time.t_end;
    let threshold = config.thresholds.blowup;
    let k = spec.components();

    let history_nodes = config.time.history_r_max.map_or(grid.nodes(), |r| {
        (((r - 1.0) / grid.dr).ceil() as usize + 1).clamp(2, grid.nodes())
    });
    let mut history = config
        .time
        .history_stride
        .map(|_| SolutionHistory::new(grid, spec.dim));
    let stride = config.time.history_stride.unwrap_or(usize::MAX);

    let initial = data.state(&grid, k);
    let mut peak_history = vec![PeakSample {
        t: 0.0,
        max_norm: initial.max_norm(),
    }];
    let mut stepper = Stepper::new(&spec, grid, dt, cfl)?;
    stepper.start(&initial)?;
    if let Some(h) = history.as_mut() {
        h.push(0.0, &initial.u, initial.v.clone(), history_nodes);
    }

    // Levels n−1 and n; the stepper holds n and n+1.
    let mut before = initial.u.clone();
    let mut before_v = initial.v.clone();
    let mut level = 0usize;
    let mut nan_flag = false;
    let mut outcome = None;

    loop {
        let t_next = stepper.time();
        let next = stepper.current();
        let (norm, _, _) = max_norm(next);
        if norm > threshold || !norm.is_finite() {
            nan_flag = next.iter().flatten().any(|x| !x.is_finite());
            let left = RadialState {
                t: t_next - dt,
                u: stepper.previous().to_vec(),
                v: if level == 0 {
                    before_v.clone()
                } else {
                    central_velocity(next, &before, dt)
                },
            };
            let left = if nan_flag {
                left
            } else {
                let (state, _) = bisect_crossing(&spec, grid, cfl, left, dt, threshold)?;
                state
            };
            outcome = Some(left);
            break;
        }
        peak_history.push(PeakSample {
            t: t_next,
            max_norm: norm,
        });
        if let Some(h) = history.as_mut() {
            if level > 0 && level.is_multiple_of(stride) {
                let v = central_velocity(next, &before, dt);
                h.push(t_next - dt, stepper.previous(), v, history_nodes);
            }
        }
        if t_next >= t_end - 1e-12 * t_end {
            break;
        }
        before = stepper.previous().to_vec();
        before_v.clear();
        stepper.advance();
        level += 1;
    }

    let steps = level + 1;
    let (verdict, t_cross) = match outcome {
        Some(left) => {
            if let Some(h) = history.as_mut() {
                if h.times.last().is_some_and(|&t| t < left.t) {
                    h.push(left.t, &left.u, left.v.clone(), history_nodes);
                }
            }
            let t_cross = left.t;
            let t_blow = if nan_flag {
                t_cross
            } else {
                t_cross + tail_estimate(&left, &gamma)
            };
            (Verdict::BlewUp { t_blow }, Some(t_cross))
        }
        None => {
            if let Some(h) = history.as_mut() {
                let t = stepper.time();
                if h.times.last().is_some_and(|&s| s < t) {
                    let v: Vec<Vec<f64>> = stepper
                        .current()
                        .iter()
                        .zip(stepper.previous())
                        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) / dt).collect())
                        .collect();
                    h.push(t, stepper.current(), v, history_nodes);
                }
            }
            (
                Verdict::SurvivedHorizon {
                    t_end: stepper.time(),
                },
                None,
            )
        }
    };
    log::debug!(
        "run eps={} verdict={verdict:?} steps={steps} dt={dt}",
        config.data.epsilon
    );
    Ok(RunRecord {
        config: config.clone(),
        dr: grid.dr,
        dt,
        steps,
        verdict,
        t_cross,
        nan_flag,
        positivity,
        peak_history,
        history,
    })
}

/// Reruns `config` at each threshold; returns `(M, t_blow)` pairs.
pub fn threshold_sensitivity(
    config: &RunConfig,
    thresholds: &[f64],
) -> Result<Vec<(f64, Option<f64>)>> {
    thresholds
        .iter()
        .map(|&m| {
            let mut c = config.clone();
            c.thresholds.blowup = m;
            c.time.history_stride = None;
            Ok((m, run(&c)?.verdict.t_blow()))
        })
        .collect()
}

/// Writes the record as pretty JSON.
pub fn write_record(record: &RunRecord, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, record)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_spec(d: u32, bc: BoundaryCondition) -> SystemSpec {
        SystemSpec::new(ExponentVector::new(vec![2.0]).unwrap(), d, bc)
            .unwrap()
            .linear()
    }

    #[test]
    fn zero_state_stays_zero() {
        let grid = RadialGrid::new(6.0, 64).unwrap();
        let spec = SystemSpec::new(
            ExponentVector::new(vec![2.0, 3.0]).unwrap(),
            3,
            BoundaryCondition::dirichlet(),
        )
        .unwrap();
        let mut s = Stepper::new(&spec, grid, 0.9 * grid.dr, DEFAULT_CFL).unwrap();
        s.start(&RadialState::zeros(2, &grid)).unwrap();
        for _ in 0..50 {
            s.advance();
        }
        assert!(s.current().iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn cfl_is_enforced() {
        let grid = RadialGrid::new(6.0, 64).unwrap();
        let spec = linear_spec(3, BoundaryCondition::dirichlet());
        assert!(matches!(
            Stepper::new(&spec, grid, grid.dr, DEFAULT_CFL),
            Err(Error::Cfl { .. })
        ));
    }

    #[test]
    fn grid_rejects_coarse_or_degenerate() {
        assert!(RadialGrid::new(5.0, 8).is_err());
        assert!(RadialGrid::new(1.0, 64).is_err());
        let g = RadialGrid::new(5.0, 16).unwrap();
        assert_eq!(g.nodes(), 17);
        assert!((g.r(16) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn ghost_nodes() {
        let neumann = BoundaryCondition::neumann();
        assert_eq!(ghost_node(0.3, 0.7, 0.1, &neumann), 0.7);
        let robin = BoundaryCondition::robin(1.0, 1.0).unwrap();
        assert!((ghost_node(1.0, 2.0, 0.1, &robin) - 1.8).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_boundary_holds_zero() {
        let grid = RadialGrid::new(4.0, 32).unwrap();
        let mut state = InitialData::bump(1.0).state(&grid, 1);
        state.u[0][0] = 5.0;
        apply_boundary(&mut state, &BoundaryCondition::dirichlet()).unwrap();
        assert_eq!(state.u[0][0], 0.0);
        assert_eq!(*state.u[0].last().unwrap(), 0.0);
        assert!(apply_boundary(
            &mut state,
            &BoundaryCondition {
                alpha: 0.0,
                beta: 0.0
            }
        )
        .is_err());
    }

    #[test]
    fn robin_ghost_matches_harmonic_profile() {
        let bc = BoundaryCondition::robin(1.0, 1.0).unwrap();
        for d in [3u32, 4, 5] {
            let w = HarmonicWeight::new(d, bc).unwrap();
            let mut prev = None;
            for dr in [0.04, 0.02, 0.01] {
                let ghost = ghost_node(w.value_extended(1.0), w.value_extended(1.0 + dr), dr, &bc);
                let err = (ghost - w.value_extended(1.0 - dr)).abs();
                assert!(err <= 50.0 * dr * dr * dr, "d={d} dr={dr} err={err}");
                if let Some(e) = prev {
                    let ratio: f64 = e / err;
                    assert!(ratio > 7.0 && ratio < 9.0, "ratio {ratio}");
                }
                prev = Some(err);
            }
        }
    }

    #[test]
    fn operator_is_symmetric_in_energy_weights() {
        for bc in [
            BoundaryCondition::dirichlet(),
            BoundaryCondition::neumann(),
            BoundaryCondition::robin(1.0, 2.0).unwrap(),
        ] {
            let grid = RadialGrid::new(3.0, 20).unwrap();
            let op = RadialOperator::new(grid, 3, &bc);
            let n = grid.nodes();
            let mut a = vec![0.0; n];
            let mut b = vec![0.0; n];
            for j in 0..n - 1 {
                a[j] = (j as f64 * 0.7).sin();
                b[j] = (j as f64 * 0.3).cos();
            }
            if bc.alpha == 0.0 {
                a[0] = 0.0;
                b[0] = 0.0;
            }
            let (mut la, mut lb) = (vec![0.0; n], vec![0.0; n]);
            op.apply(&a, &mut la);
            op.apply(&b, &mut lb);
            let (x, y) = (op.inner(&la, &b), op.inner(&a, &lb));
            assert!(
                (x - y).abs() < 1e-10 * x.abs().max(1.0),
                "{bc:?}: {x} vs {y}"
            );
            assert!(op.inner(&la, &a) <= 0.0);
        }
    }

    #[test]
    fn operator_is_second_order_on_smooth_fields() {
        // u = sin(r) in d = 3: Δu = -sin r + 2 cos r / r.
        let mut errs = Vec::new();
        for cells in [40usize, 80, 160] {
            let grid = RadialGrid::new(3.0, cells).unwrap();
            let op = RadialOperator::new(grid, 3, &BoundaryCondition::neumann());
            let u: Vec<f64> = grid.positions().iter().map(|r| r.sin()).collect();
            let mut lu = vec![0.0; u.len()];
            op.apply(&u, &mut lu);
            let err = (1..cells)
                .map(|j| {
                    let r = grid.r(j);
                    (lu[j] - (-r.sin() + 2.0 * r.cos() / r)).abs()
                })
                .fold(0.0, f64::max);
            errs.push(err);
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
        }
    }

    fn energy_trace(bc: BoundaryCondition, d: u32) -> Vec<f64> {
        let grid = RadialGrid::new(12.0, 400).unwrap();
        let spec = linear_spec(d, bc);
        let mut s = Stepper::new(&spec, grid, 0.9 * grid.dr, DEFAULT_CFL).unwrap();
        let mut state = InitialData::bump(1.0).state(&grid, 1);
        if bc.alpha != 0.0 {
            // Nonzero boundary data exercises the ghost-node energy.
            for (j, x) in state.u[0].iter_mut().enumerate() {
                *x += (-(grid.r(j) - 1.0).powi(2) * 4.0).exp();
            }
            *state.u[0].last_mut().unwrap() = 0.0;
        }
        s.start(&state).unwrap();
        let mut out = vec![s.energy()];
        for _ in 0..600 {
            s.advance();
            out.push(s.energy());
        }
        out
    }

    #[test]
    fn linear_energy_is_non_increasing() {
        for bc in [
            BoundaryCondition::dirichlet(),
            BoundaryCondition::neumann(),
            BoundaryCondition::robin(1.0, 1.0).unwrap(),
            BoundaryCondition::robin(2.0, 1.0).unwrap(),
        ] {
            for d in [1u32, 2, 3] {
                let e = energy_trace(bc, d);
                assert!(e[0] > 0.0);
                for w in e.windows(2) {
                    assert!(
                        w[1] <= w[0] + 1e-13 * e[0],
                        "{bc:?} d={d}: {} -> {}",
                        w[0],
                        w[1]
                    );
                }
                assert!(*e.last().unwrap() < 0.5 * e[0]);
            }
        }
    }

    /// Max error at `t = 1` against `e^{−t} η(r)` driven by its exact source.
    fn manufactured_error(cells: usize, bc: BoundaryCondition, d: u32) -> f64 {
        let (c, w) = (2.5, 1.0);
        let grid = RadialGrid::new(5.0, cells).unwrap();
        let spec = linear_spec(d, bc);
        let df = f64::from(d);
        let source: Source = Arc::new(move |_, t, r| {
            let (_, e1, e2) = bump(r, c, w);
            -(-t).exp() * (e2 + (df - 1.0) / r * e1)
        });
        let dt = 0.5 * grid.dr;
        let mut s = Stepper::new(&spec, grid, dt, DEFAULT_CFL)
            .unwrap()
            .with_source(source);
        let mut state = RadialState::zeros(1, &grid);
        for j in 0..grid.nodes() {
            let eta = bump(grid.r(j), c, w).0;
            state.u[0][j] = eta;
            state.v[0][j] = -eta;
        }
        s.start(&state).unwrap();
        let steps = (1.0 / dt).round() as usize;
        for _ in 1..steps {
            s.advance();
        }
        let t = s.time();
        s.current()[0]
            .iter()
            .enumerate()
            .map(|(j, x)| (x - (-t).exp() * bump(grid.r(j), c, w).0).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn manufactured_solution_converges_at_second_order() {
        for d in [1u32, 3] {
            let errs: Vec<f64> = [100usize, 200, 400]
                .iter()
                .map(|&n| manufactured_error(n, BoundaryCondition::dirichlet(), d))
                .collect();
            for w in errs.windows(2) {
                let ratio = w[0] / w[1];
                assert!(ratio > 3.2 && ratio < 4.8, "d={d} errs={errs:?}");
            }
        }
    }

    #[test]
    fn positivity_functional() {
        let grid = RadialGrid::new(8.0, 400).unwrap();
        let data = InitialData::bump(1.0);
        assert!(
            validate_data_positivity(&data, &grid, 2, &BoundaryCondition::neumann()).unwrap() > 0.0
        );
        let shifted = InitialData {
            center: 2.5,
            ..data
        };
        assert!(
            validate_data_positivity(&shifted, &grid, 2, &BoundaryCondition::dirichlet()).unwrap()
                > 0.0
        );
        let cancel = InitialData {
            u1_amplitude: -1.0,
            ..data
        };
        match validate_data_positivity(&cancel, &grid, 3, &BoundaryCondition::dirichlet()) {
            Err(Error::DataPositivity { value }) => assert_eq!(value, 0.0),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn positivity_oracle_for_dirichlet_bump() {
        // d = 2 Dirichlet: ω₁ ∫ 2 g(|r-2.5|/0.5) log r · r dr by midpoint rule.
        let grid = RadialGrid::new(8.0, 2000).unwrap();
        let data = InitialData {
            center: 2.5,
            ..InitialData::bump(1.0)
        };
        let got =
            validate_data_positivity(&data, &grid, 2, &BoundaryCondition::dirichlet()).unwrap();
        let m = 200_000;
        let h = 1.0 / m as f64;
        let mut want = 0.0;
        for i in 0..m {
            let r = 2.0 + (i as f64 + 0.5) * h;
            want += 2.0 * bump(r, 2.5, 0.5).0 * r.ln() * r * h;
        }
        want *= 2.0 * std::f64::consts::PI;
        assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
    }

    #[test]
    fn zero_data_survives() {
        let mut cfg = RunConfig::new(&[1.4, 1.4], 3, 200, 5.0, 0.0);
        cfg.time.history_stride = Some(10);
        let rec = run(&cfg).unwrap();
        assert!(matches!(rec.verdict, Verdict::SurvivedHorizon { t_end } if t_end >= 5.0));
        assert!(rec.peak_history.iter().all(|p| p.max_norm == 0.0));
        let h = rec.history.unwrap();
        assert!(h.u.iter().flatten().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn config_validation() {
        let mut cfg = RunConfig::new(&[2.0], 3, 200, 5.0, 0.5);
        cfg.grid.r_max = Some(4.0);
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
        let mut cfg = RunConfig::new(&[2.0], 3, 200, 5.0, 0.5);
        cfg.time.dt = Some(1.0);
        assert!(matches!(run(&cfg), Err(Error::Cfl { .. })));
        let mut cfg = RunConfig::new(&[2.0], 3, 200, 5.0, 0.5);
        cfg.bc = BcSection {
            alpha: 1.0,
            beta: -1.0,
        };
        assert!(run(&cfg).is_err());
        let mut cfg = RunConfig::new(&[2.0], 3, 200, 5.0, 0.5);
        cfg.data.u1_amplitude = -1.0;
        assert!(matches!(run(&cfg), Err(Error::DataPositivity { .. })));
    }

    #[test]
    fn domain_of_dependence() {
        let base = RunConfig::new(&[2.0, 2.0], 3, 0, 4.0, 0.3);
        let dr = 0.02;
        let run_with = |r_max: f64| {
            let mut c = base.clone();
            c.grid.r_max = Some(r_max);
            c.grid.cells = ((r_max - 1.0) / dr).round() as usize;
            c.time.dt = Some(0.9 * dr);
            c.time.history_stride = Some(1);
            run(&c).unwrap()
        };
        let a = run_with(9.0);
        let b = run_with(15.0);
        let (ha, hb) = (a.history.unwrap(), b.history.unwrap());
        let last = ha.times.len() - 1;
        assert_eq!(ha.times[last], hb.times[last]);
        let interior = ((6.5 - 1.0) / dr) as usize;
        let diff = (0..interior)
            .map(|j| (ha.u[last][0][j] - hb.u[last][0][j]).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-10, "diff {diff}");
    }

    fn blowup_config(eps: f64) -> RunConfig {
        RunConfig::new(&[1.4, 1.4], 3, 1500, 40.0, eps)
    }

    #[test]
    fn subcritical_run_blows_up_and_is_monotone_in_eps() {
        let a = run(&blowup_config(0.5)).unwrap();
        let b = run(&blowup_config(0.25)).unwrap();
        let (ta, tb) = (a.verdict.t_blow().unwrap(), b.verdict.t_blow().unwrap());
        assert!(ta < tb, "{ta} vs {tb}");
        assert!(!a.nan_flag);
        let tc = a.t_cross.unwrap();
        assert!(tc <= ta && ta - tc < 1.0);
    }

    #[test]
    fn threshold_sensitivity_is_below_two_steps() {
        let cfg = blowup_config(0.5);
        let grid = cfg.grid().unwrap();
        let dt = cfg.dt(&grid);
        let res = threshold_sensitivity(&cfg, &[1e6, 1e8, 1e10]).unwrap();
        let t: Vec<f64> = res.iter().map(|(_, t)| t.unwrap()).collect();
        assert!((t[0] - t[2]).abs() < 2.0 * dt, "{t:?} dt={dt}");
        assert!((t[1] - t[2]).abs() < 2.0 * dt, "{t:?} dt={dt}");
    }

    #[test]
    fn nonnegative_data_stays_nonnegative() {
        let mut cfg = blowup_config(0.5);
        cfg.time.history_stride = Some(5);
        let rec = run(&cfg).unwrap();
        let h = rec.history.unwrap();
        let (min, peak) =
            h.u.iter()
                .flatten()
                .flatten()
                .fold((0.0f64, 0.0f64), |(m, p), &x| (m.min(x), p.max(x)));
        assert!(min >= -1e-6 * peak, "min {min} peak {peak}");
    }

    #[test]
    fn history_covers_requested_region() {
        let mut cfg = blowup_config(0.5);
        cfg.time.history_stride = Some(4);
        cfg.time.history_r_max = Some(10.0);
        let rec = run(&cfg).unwrap();
        let h = rec.history.unwrap();
        assert!(h.r_max() >= 10.0 && h.r_max() < 10.0 + 2.0 * h.grid.dr);
        assert_eq!(h.components(), 2);
        assert_eq!(h.t_final, rec.t_cross.unwrap());
        assert!(h.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_round_trips_through_toml() {
        let text = r#"
            [system]
            p = [1.4, 1.4]
            dim = 3
            [grid]
            cells = 400
            [time]
            t_end = 20.0
            [bc]
            alpha = 1.0
            beta = 1.0
            [data]
            epsilon = 0.5
        "#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.time.cfl, DEFAULT_CFL);
        assert_eq!(cfg.thresholds.blowup, DEFAULT_BLOWUP_THRESHOLD);
        assert_eq!(cfg.data.center, 2.0);
        cfg.validate().unwrap();
        let back: RunConfig = toml::from_str(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
