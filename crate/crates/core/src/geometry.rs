//! Thermodynamic metric on the `(beta, gamma)` plane and its scalar curvature.
//!
//! At fixed fugacity the grand potential scales as
//! `ln Z = K beta^(-p) a(gamma)` with `p = D/2`, so the Hessian metric is
//!
//! ```text
//! g11 = p (p + 1) K beta^(-p-2) a
//! g12 = p K beta^(-p-1) b
//! g22 = K beta^(-p) c
//! ```
//!
//! where `a, b, c, d` are the theta-moments from [`crate::quadrature`] and
//! `d/dgamma` walks down the ladder `a -> -b -> c -> -d`.
//!
//! Two routes to the curvature are provided. [`curvature_closed_form`] uses
//! the reduced expression in `a, b, c, d`. [`determinant_curvature_oracle`]
//! assembles the 3x3 determinant of the metric and its first derivatives
//! directly, either from the analytic ladder or from finite differences of
//! the metric in `gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{validate_domain, Dimension, GasSpec};
use crate::quadrature::{moment_integrals, MomentSet, QuadratureConfig};

/// Default `gamma` step of the finite-difference oracle.
pub const DEFAULT_FD_STEP: f64 = 2e-3;

/// Denominators below this magnitude are treated as a degenerate metric.
pub const DEGENERACY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Doubled curvature, comparable with a single-species q = 1 gas.
    #[default]
    #[serde(rename = "paper")]
    PaperFactor2,
    Raw,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::PaperFactor2 => 2.0,
            Normalization::Raw => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Normalization::PaperFactor2 => "paper",
            Normalization::Raw => "raw",
        }
    }
}

/// Independent components of the symmetric 2x2 metric at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub beta: f64,
    pub spec: GasSpec,
}

impl MetricTensor {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.g22 > 0.0 && self.det() > 0.0
    }

    /// Builds the metric from moments at a given `beta` (unit volume).
    pub fn from_moments(moments: &MomentSet, beta: f64) -> Self {
        let [g11, g12, g22] = metric_components(moments.spec.dimension, beta, moments.a, moments.b, moments.c);
        MetricTensor { g11, g12, g22, beta, spec: moments.spec }
    }
}

fn metric_components(dim: Dimension, beta: f64, a: f64, b: f64, c: f64) -> [f64; 3] {
    let p = dim.beta_power();
    let scale = dim.prefactor() * beta.powf(-p);
    [p * (p + 1.0) * scale * a / (beta * beta), p * scale * b / beta, scale * c]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureResult {
    /// Scalar curvature in units of `lambda^D / volume`.
    pub r_reduced: f64,
    pub normalization: Normalization,
    pub moments: MomentSet,
}

impl CurvatureResult {
    /// Same curvature under another normalization.
    pub fn renormalized(&self, to: Normalization) -> Self {
        let raw = self.r_reduced / self.normalization.factor();
        CurvatureResult { r_reduced: raw * to.factor(), normalization: to, moments: self.moments }
    }
}

pub fn metric_tensor(spec: &GasSpec, beta: f64, z: f64, cfg: &QuadratureConfig) -> Result<MetricTensor> {
    check_beta(beta)?;
    let moments = moment_integrals(spec, z, cfg)?;
    Ok(MetricTensor::from_moments(&moments, beta))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be positive and finite, got {beta}")))
    }
}

/// Raw reduced curvature from the four moments.
///
/// D = 3: `5 sqrt(pi) N / (2 (5ac - 3b^2)^2)`, D = 2: `N / (2ac - b^2)^2`,
/// with `N = b^2 c + a b d - 2 a c^2`.
pub fn curvature_from_moments(dim: Dimension, a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let numerator = b * b * c + a * b * d - 2.0 * a * c * c;
    let (prefactor, denom) = match dim {
        Dimension::D3 => (2.5 * std::f64::consts::PI.sqrt(), 5.0 * a * c - 3.0 * b * b),
        Dimension::D2 => (1.0, 2.0 * a * c - b * b),
    };
    if denom.is_nan() || denom.abs() < DEGENERACY_FLOOR {
        return Err(Error::DegenerateMetric(denom));
    }
    Ok(prefactor * numerator / (denom * denom))
}

pub fn curvature_closed_form(
    spec: &GasSpec,
    z: f64,
    normalization: Normalization,
    cfg: &QuadratureConfig,
) -> Result<CurvatureResult> {
    let moments = moment_integrals(spec, z, cfg)?;
    curvature_for_moments(&moments, normalization)
}

pub fn curvature_for_moments(moments: &MomentSet, normalization: Normalization) -> Result<CurvatureResult> {
    let raw = curvature_from_moments(moments.spec.dimension, moments.a, moments.b, moments.c, moments.d)?;
    Ok(CurvatureResult { r_reduced: raw * normalization.factor(), normalization, moments: *moments })
}

/// How the oracle obtains `gamma`-derivatives of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GammaDerivative {
    /// `d/dgamma` of `(a, b, c)` is `(-b, -c, -d)`.
    Ladder,
    /// Richardson-extrapolated central differences with the given step in `gamma`.
    /// `target_tol` bounds the accepted disagreement between extrapolation levels.
    FiniteDifference { step: f64, target_tol: f64 },
}

impl GammaDerivative {
    pub fn finite_difference(step: f64) -> Self {
        GammaDerivative::FiniteDifference { step, target_tol: 1e-6 }
    }

    pub fn default_finite_difference() -> Self {
        Self::finite_difference(DEFAULT_FD_STEP)
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Metric components `(g11, g22, g12)` at `(beta, z)`; determinant column order.
fn metric_row(dim: Dimension, beta: f64, m: &MomentSet) -> [f64; 3] {
    let [g11, g12, g22] = metric_components(dim, beta, m.a, m.b, m.c);
    [g11, g22, g12]
}

/// Scalar curvature from the determinant formula
/// `R = det[[g11, g22, g12], [d_beta ...], [d_gamma ...]] / (2 det(g)^2)`,
/// returned in reduced units (`Raw` normalization).
///
/// `beta`-derivatives are exact because each component is a pure power of
/// `beta`. The result is independent of `beta`.
pub fn determinant_curvature_oracle(
    spec: &GasSpec,
    beta: f64,
    z: f64,
    mode: GammaDerivative,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_beta(beta)?;
    validate_domain(spec, z)?;
    let dim = spec.dimension;
    let p = dim.beta_power();
    let moments = moment_integrals(spec, z, cfg)?;
    let g = metric_row(dim, beta, &moments);

    let d_beta = [(-p - 2.0) / beta * g[0], -p / beta * g[1], (-p - 1.0) / beta * g[2]];

    let d_gamma = match mode {
        GammaDerivative::Ladder => {
            let [g11, g12, g22] = metric_components(dim, beta, -moments.b, -moments.c, -moments.d);
            [g11, g22, g12]
        }
        GammaDerivative::FiniteDifference { step, target_tol } => {
            gamma_derivative_fd(spec, beta, z, step, target_tol, cfg)?
        }
    };

    let det_g = g[0] * g[1] - g[2] * g[2];
    if det_g.is_nan() || det_g.abs() < DEGENERACY_FLOOR {
        return Err(Error::DegenerateMetric(det_g));
    }
    let big = det3(&[g, d_beta, d_gamma]);
    let r = big / (2.0 * det_g * det_g);
    Ok(r / crate::params::ReducedUnits::default().curvature_unit(dim, beta))
}

/// Central differences of the metric in `gamma`, Richardson-extrapolated
/// from steps `(h, h/2)` and again from `(h/2, h/4)`. The two extrapolants
/// must agree to within `10 * target_tol` (relative) or the step is rejected.
fn gamma_derivative_fd(
    spec: &GasSpec,
    beta: f64,
    z: f64,
    step: f64,
    target_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<[f64; 3]> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {step}")));
    }
    let dim = spec.dimension;
    let gamma = -z.ln();
    let row_at = |g: f64| -> Result<[f64; 3]> {
        let zz = (-g).exp();
        validate_domain(spec, zz)?;
        Ok(metric_row(dim, beta, &moment_integrals(spec, zz, cfg)?))
    };
    let central = |h: f64| -> Result<[f64; 3]> {
        let plus = row_at(gamma + h)?;
        let minus = row_at(gamma - h)?;
        Ok(std::array::from_fn(|i| (plus[i] - minus[i]) / (2.0 * h)))
    };
    let richardson =
        |coarse: [f64; 3], fine: [f64; 3]| -> [f64; 3] { std::array::from_fn(|i| (4.0 * fine[i] - coarse[i]) / 3.0) };
    let d1 = central(step)?;
    let d2 = central(0.5 * step)?;
    let d4 = central(0.25 * step)?;
    let first = richardson(d1, d2);
    let second = richardson(d2, d4);

    let limit = 10.0 * target_tol;
    let disagreement = first
        .iter()
        .zip(second.iter())
        .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if disagreement > limit {
        return Err(Error::StepTooLarge { disagreement, limit });
    }
    Ok(second)
}

/// Bisects in `q` for a sign change of `R(z, q)` on `[q_lo, q_hi]`.
///
/// Returns `None` when both endpoints have the same sign.
pub fn curvature_sign_boundary(
    spec: &GasSpec,
    z: f64,
    q_lo: f64,
    q_hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Option<f64>> {
    if !(q_lo > 0.0 && q_hi > q_lo && q_hi.is_finite()) {
        return Err(Error::InvalidBracket { lo: q_lo, hi: q_hi });
    }
    let r_at =
        |q: f64| -> Result<f64> { Ok(curvature_closed_form(&spec.with_q(q)?, z, Normalization::Raw, cfg)?.r_reduced) };
    crate::roots::bisect_sign_change(r_at, q_lo, q_hi, 1e-4)
}
