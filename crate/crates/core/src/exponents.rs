//! Exponent algebra for the weakly coupled system.
//!
//! Component `ℓ` is driven by `|u_{ℓ-1}|^{p_ℓ}` (cyclically, `u_0 := u_k`).
//! The criticality vector `γ` solves `(P - I)γ = 1` where `P` is the cyclic
//! matrix carrying `p_1` in its top-right corner and `p_2, …, p_k` on the
//! subdiagonal. Blow-up regimes are decided by `γ_max` against `d/2`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance deciding `|γ_max - d/2| ≤ tol` ⇒ critical.
pub const DEFAULT_TOL_CRIT: f64 = 1e-9;

/// The nonlinearity powers `p_1, …, p_k`, each strictly greater than one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector(Vec<f64>);

impl ExponentVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidExponents("need at least one exponent".into()));
        }
        if let Some((i, bad)) = p
            .iter()
            .enumerate()
            .find(|(_, &x)| !(x.is_finite() && x > 1.0))
        {
            return Err(Error::InvalidExponents(format!(
                "p_{} = {bad} must be a finite value > 1",
                i + 1
            )));
        }
        Ok(Self(p))
    }

    /// Parses a comma-separated list such as `"1.4,1.4"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::InvalidExponents(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `p_ℓ` with 1-based cyclic indexing (`p_0 = p_k`, `p_{k+1} = p_1`).
    pub fn cyclic(&self, index: isize) -> f64 {
        let k = self.0.len() as isize;
        self.0[((index - 1).rem_euclid(k)) as usize]
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Exact comparison of the stated values.
    pub fn all_equal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Smallest admissible cutoff exponent `λ = max_ℓ 2/(p_ℓ - 1)`.
    pub fn lambda_floor(&self) -> f64 {
        2.0 / (self.min() - 1.0)
    }
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(value: ExponentVector) -> Self {
        value.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
    Robin,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryKind::Dirichlet => "Dirichlet",
            BoundaryKind::Neumann => "Neumann",
            BoundaryKind::Robin => "Robin",
        };
        f.write_str(s)
    }
}

/// `α ∂u/∂n⁺ + β u = 0` on `|x| = 1`, with `n⁺` pointing toward the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub alpha: f64,
    pub beta: f64,
}

impl BoundaryCondition {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidBoundary(format!(
                "non-finite coefficients ({alpha}, {beta})"
            )));
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::InvalidBoundary("(alpha, beta) = (0, 0)".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn dirichlet() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
        }
    }

    pub fn neumann() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
        }
    }

    pub fn robin(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta)
    }

    pub fn kind(&self) -> BoundaryKind {
        if self.alpha == 0.0 {
            BoundaryKind::Dirichlet
        } else if self.beta == 0.0 {
            BoundaryKind::Neumann
        } else {
            BoundaryKind::Robin
        }
    }

    pub fn beta_nonzero(&self) -> bool {
        self.beta != 0.0
    }

    /// Well-posedness of the damped wave flow needs `αβ ≥ 0`.
    pub fn validate_for_solver(&self) -> Result<()> {
        Self::new(self.alpha, self.beta)?;
        if self.alpha * self.beta < 0.0 {
            return Err(Error::InvalidBoundary(format!(
                "alpha * beta = {} < 0 is outside the dissipative range",
                self.alpha * self.beta
            )));
        }
        Ok(())
    }

    /// `∂_r u(1) = slope · u(1)`; only meaningful when `α ≠ 0`.
    pub fn radial_slope(&self) -> f64 {
        self.beta / self.alpha
    }
}

/// Builds the cyclic `k×k` matrix `P`.
pub fn build_matrix_p(p: &ExponentVector) -> Result<DMatrix<f64>> {
    let k = p.len();
    if k == 0 {
        return Err(Error::InvalidExponents("k = 0".into()));
    }
    let mut m = DMatrix::zeros(k, k);
    m[(0, k - 1)] = p.as_slice()[0];
    for row in 1..k {
        m[(row, row - 1)] = p.as_slice()[row];
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub p: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_max: f64,
    /// Index (0-based) of a component attaining `gamma_max`.
    pub argmax: usize,
    pub product_p: f64,
    pub equal_exponents: bool,
    pub dimension: u32,
    /// `γ_max - d/2`.
    pub gamma_excess: f64,
    /// `‖(P - I)γ - 1‖_∞`.
    pub residual: f64,
}

/// Solves `(P - I)γ = 1` by LU with partial pivoting.
pub fn compute_gamma(p: &ExponentVector, d: u32) -> Result<GammaReport> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "dimension",
            detail: "d must be >= 1".into(),
        });
    }
    let k = p.len();
    let mut a = build_matrix_p(p)?;
    for i in 0..k {
        a[(i, i)] -= 1.0;
    }
    let ones = DVector::from_element(k, 1.0);
    let det = if k % 2 == 1 { 1.0 } else { -1.0 } * (p.product() - 1.0);
    let gamma = a
        .clone()
        .lu()
        .solve(&ones)
        .ok_or(Error::SingularSystem { det })?;
    let residual = (&a * &gamma - &ones).amax();

    let (argmax, gamma_max) =
        gamma
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, g)| if g > acc.1 { (i, g) } else { acc },
            );

    Ok(GammaReport {
        p: p.as_slice().to_vec(),
        gamma: gamma.iter().copied().collect(),
        gamma_max,
        argmax,
        product_p: p.product(),
        equal_exponents: p.all_equal(),
        dimension: d,
        gamma_excess: gamma_max - f64::from(d) / 2.0,
        residual,
    })
}

/// Closed form `γ_j = (1 + p_j + p_j p_{j-1} + … + p_j ⋯ p_{j-k+2}) / (∏p - 1)`,
/// `index` is 1-based.
pub fn gamma_cyclic_closed_form(p: &ExponentVector, index: usize) -> Result<f64> {
    let k = p.len();
    if index == 0 || index > k {
        return Err(Error::OutOfRange {
            what: "component index",
            detail: format!("{index} not in 1..={k}"),
        });
    }
    let mut numerator = 0.0;
    let mut term = 1.0;
    for m in 0..k {
        numerator += term;
        term *= p.cyclic(index as isize - m as isize);
    }
    Ok(numerator / (p.product() - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundForm {
    /// `C ε^{-b}`
    Polynomial,
    /// `C (ε^{-1} log ε^{-1})^{b}`; for the two-dimensional integral lemma the
    /// log power may differ from the algebraic one.
    PolynomialLog,
    /// `exp(C ε^{-q})`
    Exponential,
    /// `exp exp(C ε^{-q})`
    DoubleExponential,
    NoBlowupClaim,
}

impl fmt::Display for BoundForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundForm::Polynomial => "polynomial",
            BoundForm::PolynomialLog => "polynomial-log",
            BoundForm::Exponential => "exponential",
            BoundForm::DoubleExponential => "double-exponential",
            BoundForm::NoBlowupClaim => "no-blowup-claim",
        };
        f.write_str(s)
    }
}

/// Shape of an upper lifespan bound; the constant `C` is never known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifespanBound {
    pub form: BoundForm,
    /// Power of `ε^{-1}` (polynomial forms) or `q` (exponential forms).
    pub exponent: Option<f64>,
    /// Power of `log ε^{-1}` for [`BoundForm::PolynomialLog`].
    pub log_exponent: Option<f64>,
    pub notes: String,
}

impl LifespanBound {
    fn polynomial(b: f64, notes: impl Into<String>) -> Self {
        Self {
            form: BoundForm::Polynomial,
            exponent: Some(b),
            log_exponent: None,
            notes: notes.into(),
        }
    }

    fn polynomial_log(b: f64, b_log: f64, notes: impl Into<String>) -> Self {
        Self {
            form: BoundForm::PolynomialLog,
            exponent: Some(b),
            log_exponent: Some(b_log),
            notes: notes.into(),
        }
    }

    fn exponential(q: f64, notes: impl Into<String>) -> Self {
        Self {
            form: BoundForm::Exponential,
            exponent: Some(q),
            log_exponent: None,
            notes: notes.into(),
        }
    }

    fn double_exponential(q: f64, notes: impl Into<String>) -> Self {
        Self {
            form: BoundForm::DoubleExponential,
            exponent: Some(q),
            log_exponent: None,
            notes: notes.into(),
        }
    }

    fn no_claim(notes: impl Into<String>) -> Self {
        Self {
            form: BoundForm::NoBlowupClaim,
            exponent: None,
            log_exponent: None,
            notes: notes.into(),
        }
    }

    pub fn predicts_blowup(&self) -> bool {
        self.form != BoundForm::NoBlowupClaim
    }

    /// Exponent `b` of a polynomial-type law, if this is one.
    pub fn polynomial_slope(&self) -> Option<f64> {
        match self.form {
            BoundForm::Polynomial | BoundForm::PolynomialLog => self.exponent,
            _ => None,
        }
    }

    /// Evaluates the bound at `ε` for a chosen constant `c`.
    pub fn evaluate(&self, eps: f64, c: f64) -> f64 {
        let inv = 1.0 / eps;
        match (self.form, self.exponent) {
            (BoundForm::Polynomial, Some(b)) => c * inv.powf(b),
            (BoundForm::PolynomialLog, Some(b)) => {
                c * inv.powf(b) * inv.ln().powf(self.log_exponent.unwrap_or(b))
            }
            (BoundForm::Exponential, Some(q)) => (c * inv.powf(q)).exp(),
            (BoundForm::DoubleExponential, Some(q)) => (c * inv.powf(q)).exp().exp(),
            _ => f64::INFINITY,
        }
    }

    pub fn describe(&self) -> String {
        match (self.form, self.exponent, self.log_exponent) {
            (BoundForm::Polynomial, Some(b), _) => format!("T <= C eps^-{b:.6}"),
            (BoundForm::PolynomialLog, Some(b), Some(bl)) if b == bl => {
                format!("T <= C (eps^-1 log eps^-1)^{b:.6}")
            }
            (BoundForm::PolynomialLog, Some(b), Some(bl)) => {
                format!("T <= C eps^-{b:.6} (log eps^-1)^{bl:.6}")
            }
            (BoundForm::Exponential, Some(q), _) => format!("T <= exp(C eps^-{q:.6})"),
            (BoundForm::DoubleExponential, Some(q), _) => {
                format!("T <= exp exp(C eps^-{q:.6})")
            }
            _ => "no blow-up claim".to_string(),
        }
    }
}

/// Picks the lifespan branch for `(p, d, bc)`.
pub fn classify_regime(
    p: &ExponentVector,
    d: u32,
    bc: &BoundaryCondition,
    tol_crit: f64,
) -> Result<LifespanBound> {
    if !(tol_crit > 0.0) {
        return Err(Error::OutOfRange {
            what: "tol_crit",
            detail: format!("{tol_crit} must be > 0"),
        });
    }
    BoundaryCondition::new(bc.alpha, bc.beta)?;
    let report = compute_gamma(p, d)?;
    let gmax = report.gamma_max;
    let robin_like = bc.beta_nonzero();

    if d == 1 {
        let threshold = if robin_like { 1.0 } else { 0.5 };
        let excess = gmax - threshold;
        return Ok(if excess > tol_crit {
            LifespanBound::polynomial(1.0 / excess, format!("d=1, gamma_max={gmax} > {threshold}"))
        } else {
            LifespanBound::no_claim(format!("d=1 requires gamma_max > {threshold}, got {gmax}"))
        });
    }

    let excess = report.gamma_excess;
    if excess < -tol_crit {
        return Ok(LifespanBound::no_claim(format!(
            "gamma_max - d/2 = {excess} < 0"
        )));
    }
    let critical = excess.abs() <= tol_crit;
    let equal = report.equal_exponents;

    if !critical {
        return Ok(if robin_like && d == 2 {
            let b = 1.0 / (gmax - 1.0);
            LifespanBound::polynomial_log(b, b, "beta!=0, d=2, subcritical")
        } else {
            let note = if robin_like {
                "beta!=0, d>=3, subcritical"
            } else {
                "beta=0, d>=2, subcritical"
            };
            LifespanBound::polynomial(1.0 / excess, note)
        });
    }

    if robin_like && d == 2 {
        return if equal {
            Ok(LifespanBound::double_exponential(
                1.0,
                "beta!=0, d=2, critical, equal exponents",
            ))
        } else {
            Err(Error::Unclassifiable(
                "beta!=0, d=2, critical with unequal exponents".into(),
            ))
        };
    }

    let side = if robin_like {
        "beta!=0, d>=3"
    } else {
        "beta=0, d>=2"
    };
    Ok(if equal {
        LifespanBound::exponential(
            p.as_slice()[0] - 1.0,
            format!("{side}, critical, equal exponents"),
        )
    } else {
        LifespanBound::exponential(
            p.product() - 1.0,
            format!("{side}, critical, unequal exponents"),
        )
    })
}

/// Four-branch lifespan table of the single Dirichlet equation (`k = 1`).
///
/// `d = 1` falls back to the one-dimensional Dirichlet branch
/// `ε^{-(p-1)/(2-p)}` for `p < 2`.
pub fn single_equation_table(p: f64, d: u32, tol_crit: f64) -> Result<LifespanBound> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponents(format!("p = {p} must be > 1")));
    }
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "dimension",
            detail: "d must be >= 1".into(),
        });
    }
    Ok(match d {
        1 => {
            if p < 2.0 - tol_crit {
                LifespanBound::polynomial((p - 1.0) / (2.0 - p), "single equation, d=1, p<2")
            } else {
                LifespanBound::no_claim("single equation, d=1, p>=2")
            }
        }
        2 => {
            if (p - 2.0).abs() <= tol_crit {
                LifespanBound::double_exponential(1.0, "single equation, d=2, p=2")
            } else if p < 2.0 {
                let b = (p - 1.0) / (2.0 - p);
                LifespanBound::polynomial_log(b, b, "single equation, d=2, 1<p<2")
            } else {
                LifespanBound::no_claim("single equation, d=2, p>2")
            }
        }
        _ => {
            let df = f64::from(d);
            let fujita = 1.0 + 2.0 / df;
            if (p - fujita).abs() <= tol_crit {
                LifespanBound::exponential(p - 1.0, "single equation, d>=3, p = 1+2/d")
            } else if p < fujita {
                LifespanBound::polynomial(
                    2.0 * (p - 1.0) / (2.0 - df * (p - 1.0)),
                    "single equation, d>=3, 1<p<1+2/d",
                )
            } else {
                LifespanBound::no_claim("single equation, d>=3, p > 1+2/d")
            }
        }
    })
}

/// Bound on `√T` from the two-dimensional integral inequality
/// `ω + ∫ηφ_R ≤ C R^{-σ/p'} (log R)^{μ/p'} (∫ηφ*_R)^{1/p}`.
pub fn integral_inequality_bound(omega: f64, sigma: f64, mu: f64, p: f64) -> Result<LifespanBound> {
    if !(omega > 0.0) || !(sigma >= 0.0) || !(mu > 0.0) || !(p > 1.0) {
        return Err(Error::OutOfRange {
            what: "integral-lemma parameters",
            detail: format!("need omega>0, sigma>=0, mu>0, p>1; got ({omega}, {sigma}, {mu}, {p})"),
        });
    }
    if sigma > 0.0 {
        return Ok(LifespanBound::polynomial_log(
            1.0 / sigma,
            mu / sigma,
            "sqrt(T) bound, sigma>0",
        ));
    }
    let mu_crit = 1.0 / (p - 1.0);
    if (mu - mu_crit).abs() <= 1e-12 * mu_crit.max(1.0) {
        Ok(LifespanBound::double_exponential(
            p - 1.0,
            "sqrt(T) bound, sigma=0, mu=1/(p-1)",
        ))
    } else if mu < mu_crit {
        Ok(LifespanBound::exponential(
            (p - 1.0) / (1.0 - mu * (p - 1.0)),
            "sqrt(T) bound, sigma=0, mu<1/(p-1)",
        ))
    } else {
        Err(Error::OutOfRange {
            what: "mu",
            detail: format!("sigma=0 requires mu <= 1/(p-1) = {mu_crit}, got {mu}"),
        })
    }
}

/// Right side of `A y^s - y ≤ A^{1/(1-s)}` (`A > 0`, `y ≥ 0`, `0 < s < 1`).
pub fn power_absorption_bound(a: f64, s: f64) -> f64 {
    a.powf(1.0 / (1.0 - s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn matrix_layout() {
        let m = build_matrix_p(&pv(&[2.0, 3.0])).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 3.0, 0.0]));
        let m = build_matrix_p(&pv(&[5.0])).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(1, 1, &[5.0]));
        let m = build_matrix_p(&pv(&[2.0, 2.0, 2.0])).unwrap();
        assert_eq!(
            m,
            DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 0.0])
        );
        assert_eq!(m.iter().filter(|&&x| x != 0.0).count(), 3);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(ExponentVector::new(vec![]).is_err());
        assert!(ExponentVector::new(vec![1.0, 2.0]).is_err());
        assert!(ExponentVector::new(vec![f64::NAN]).is_err());
        assert!(ExponentVector::parse_list("2, x").is_err());
        assert_eq!(
            ExponentVector::parse_list("2, 3").unwrap().as_slice(),
            &[2.0, 3.0]
        );
    }

    #[test]
    fn gamma_examples() {
        let r = compute_gamma(&pv(&[2.0, 2.0]), 2).unwrap();
        assert!((r.gamma[0] - 1.0).abs() < 1e-12 && (r.gamma[1] - 1.0).abs() < 1e-12);
        assert!(r.gamma_excess.abs() < 1e-12);

        let r = compute_gamma(&pv(&[2.0, 3.0]), 3).unwrap();
        assert!((r.gamma[0] - 0.6).abs() < 1e-12);
        assert!((r.gamma[1] - 0.8).abs() < 1e-12);
        assert!((r.gamma_max - 0.8).abs() < 1e-12);
        assert!((r.gamma_max - (3.0 + 1.0) / (6.0 - 1.0)).abs() < 1e-12);
        assert!(r.residual <= 1e-12);

        let r = compute_gamma(&pv(&[1.4, 1.4]), 3).unwrap();
        assert!((r.gamma[0] - 2.5).abs() < 1e-12);
        assert!((r.gamma_excess - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        assert!((gamma_cyclic_closed_form(&pv(&[2.0, 2.0, 2.0]), 3).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_cyclic_closed_form(&pv(&[2.0, 3.0]), 2).unwrap() - 0.8).abs() < 1e-15);
        let q = 1.7;
        assert!((gamma_cyclic_closed_form(&pv(&[q]), 1).unwrap() - 1.0 / (q - 1.0)).abs() < 1e-15);
        assert!(gamma_cyclic_closed_form(&pv(&[2.0]), 2).is_err());
    }

    #[test]
    fn classify_examples() {
        let b = classify_regime(
            &pv(&[1.4, 1.4]),
            3,
            &BoundaryCondition::dirichlet(),
            DEFAULT_TOL_CRIT,
        )
        .unwrap();
        assert_eq!(b.form, BoundForm::Polynomial);
        assert!((b.exponent.unwrap() - 1.0).abs() < 1e-12);

        let robin = BoundaryCondition::robin(1.0, 1.0).unwrap();
        let b = classify_regime(&pv(&[2.0, 2.0]), 2, &robin, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::DoubleExponential);

        let b = classify_regime(
            &pv(&[5.0, 5.0]),
            1,
            &BoundaryCondition::neumann(),
            DEFAULT_TOL_CRIT,
        )
        .unwrap();
        assert_eq!(b.form, BoundForm::NoBlowupClaim);
    }

    #[test]
    fn classify_remaining_branches() {
        let dir = BoundaryCondition::dirichlet();
        let neu = BoundaryCondition::neumann();
        // d=2, beta!=0, subcritical: (gamma_max - 1)^-1 on eps^-1 log eps^-1.
        let b = classify_regime(&pv(&[1.5, 1.5]), 2, &dir, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::PolynomialLog);
        assert!((b.exponent.unwrap() - 1.0).abs() < 1e-12);
        // Neumann drops the log.
        let b = classify_regime(&pv(&[1.5, 1.5]), 2, &neu, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Polynomial);
        // critical d=3, unequal: gamma_2 = (1 + 2)/(3 - 1) = 3/2.
        let p = pv(&[1.5, 2.0]);
        let r = compute_gamma(&p, 3).unwrap();
        assert!(r.gamma_excess.abs() < 1e-12, "{r:?}");
        let b = classify_regime(&p, 3, &dir, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Exponential);
        assert!((b.exponent.unwrap() - 2.0).abs() < 1e-12);
        // critical d=2, unequal: gamma = ((1+5/3)/4, (1+3)/4) = (2/3, 1).
        let p = pv(&[5.0 / 3.0, 3.0]);
        let r = compute_gamma(&p, 2).unwrap();
        assert!(r.gamma_excess.abs() < 1e-12, "{r:?}");
        assert!(matches!(
            classify_regime(&p, 2, &dir, DEFAULT_TOL_CRIT),
            Err(Error::Unclassifiable(_))
        ));
        let b = classify_regime(&p, 2, &neu, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Exponential);
        assert!((b.exponent.unwrap() - 4.0).abs() < 1e-12);
        // d=1 Dirichlet needs gamma_max > 1
        let b = classify_regime(&pv(&[1.5]), 1, &dir, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Polynomial);
        assert!((b.exponent.unwrap() - 1.0).abs() < 1e-12);
        let b = classify_regime(&pv(&[2.5]), 1, &dir, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::NoBlowupClaim);
        let b = classify_regime(&pv(&[2.5]), 1, &neu, DEFAULT_TOL_CRIT).unwrap();
        assert!((b.exponent.unwrap() - 1.0 / (1.0 / 1.5 - 0.5)).abs() < 1e-12);
        assert!(classify_regime(&pv(&[2.0]), 3, &dir, 0.0).is_err());
    }

    #[test]
    fn single_equation_examples() {
        let b = single_equation_table(1.5, 3, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Polynomial);
        assert!((b.exponent.unwrap() - 2.0).abs() < 1e-12);
        let b = single_equation_table(1.0 + 2.0 / 3.0, 3, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::Exponential);
        assert!((b.exponent.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let b = single_equation_table(2.0, 2, DEFAULT_TOL_CRIT).unwrap();
        assert_eq!(b.form, BoundForm::DoubleExponential);
        assert_eq!(
            single_equation_table(3.0, 3, DEFAULT_TOL_CRIT)
                .unwrap()
                .form,
            BoundForm::NoBlowupClaim
        );
    }

    #[test]
    fn integral_inequality_examples() {
        let b = integral_inequality_bound(0.1, 2.0, 1.0, 4.0).unwrap();
        assert_eq!(b.form, BoundForm::PolynomialLog);
        assert_eq!((b.exponent, b.log_exponent), (Some(0.5), Some(0.5)));
        let b = integral_inequality_bound(0.1, 0.0, 1.0, 2.0).unwrap();
        assert_eq!(b.form, BoundForm::DoubleExponential);
        assert_eq!(b.exponent, Some(1.0));
        let b = integral_inequality_bound(0.1, 0.0, 0.5, 2.0).unwrap();
        assert_eq!(b.form, BoundForm::Exponential);
        assert!((b.exponent.unwrap() - 2.0).abs() < 1e-12);
        assert!(integral_inequality_bound(0.1, 0.0, 1.5, 2.0).is_err());
    }

    #[test]
    fn integral_inequality_matches_two_dimensional_branch() {
        // sigma = 2Γ, mu = 1, p = ∏p on sqrt(T) squares to the d=2 branch.
        let p = pv(&[1.3, 1.6]);
        let r = compute_gamma(&p, 2).unwrap();
        let b = integral_inequality_bound(0.01, 2.0 * r.gamma_excess, 1.0, p.product()).unwrap();
        let thm =
            classify_regime(&p, 2, &BoundaryCondition::dirichlet(), DEFAULT_TOL_CRIT).unwrap();
        assert!((2.0 * b.exponent.unwrap() - thm.exponent.unwrap()).abs() < 1e-12);
        assert!((2.0 * b.log_exponent.unwrap() - thm.log_exponent.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn boundary_kinds() {
        assert_eq!(
            BoundaryCondition::dirichlet().kind(),
            BoundaryKind::Dirichlet
        );
        assert_eq!(BoundaryCondition::neumann().kind(), BoundaryKind::Neumann);
        assert_eq!(
            BoundaryCondition::robin(2.0, 1.0).unwrap().kind(),
            BoundaryKind::Robin
        );
        assert!(BoundaryCondition::new(0.0, 0.0).is_err());
        assert!(BoundaryCondition::robin(1.0, -1.0)
            .unwrap()
            .validate_for_solver()
            .is_err());
    }

    #[test]
    fn bound_evaluation() {
        let b = LifespanBound::polynomial(1.0, "");
        assert!((b.evaluate(0.25, 2.0) - 8.0).abs() < 1e-12);
        assert!(LifespanBound::no_claim("").evaluate(0.1, 1.0).is_infinite());
    }
}
