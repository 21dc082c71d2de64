//! Physical model selectors, parameter-space coordinates and the q-bracket.
//!
//! Everything is expressed in reduced units: the thermal wavelength is
//! `lambda = beta^(1/2)` and the volume (or area in two dimensions) is 1
//! unless stated otherwise, so curvature values come out in units of
//! `lambda^D / volume`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Boson => f.write_str("boson"),
            Statistics::Fermion => f.write_str("fermion"),
        }
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "b" | "qgb" => Ok(Statistics::Boson),
            "fermion" | "f" | "qgf" => Ok(Statistics::Fermion),
            other => Err(Error::Domain(format!("unknown statistics '{other}'"))),
        }
    }
}

/// Number of spatial dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    D2,
    D3,
}

impl Dimension {
    pub fn as_u32(self) -> u32 {
        match self {
            Dimension::D2 => 2,
            Dimension::D3 => 3,
        }
    }

    /// Radial weight exponent `nu = (D - 2) / 2` of the momentum integral.
    pub fn nu(self) -> f64 {
        match self {
            Dimension::D2 => 0.0,
            Dimension::D3 => 0.5,
        }
    }

    /// Power `p = D / 2` with which `ln Z` scales as `beta^(-p)` at fixed fugacity.
    pub fn beta_power(self) -> f64 {
        f64::from(self.as_u32()) / 2.0
    }

    /// Constant `K` in `ln Z = K * beta^(-p) * a(z)` for unit volume.
    ///
    /// D = 3: `2/sqrt(pi)` (so that `g11 = 15/(2 sqrt(pi)) beta^-2 lambda^-3 a`);
    /// D = 2: `1`.
    pub fn prefactor(self) -> f64 {
        match self {
            Dimension::D2 => 1.0,
            Dimension::D3 => 2.0 / std::f64::consts::PI.sqrt(),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        match d {
            2 => Ok(Dimension::D2),
            3 => Ok(Dimension::D3),
            other => Err(Error::Domain(format!("dimension must be 2 or 3, got {other}"))),
        }
    }
}

/// Deformation parameter of SU_q(2). Always positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Deformation(f64);

impl Deformation {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Deformation(q))
        } else {
            Err(Error::Domain(format!("deformation q must be positive and finite, got {q}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Deformation {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Deformation::new(q)
    }
}

impl From<Deformation> for f64 {
    fn from(q: Deformation) -> f64 {
        q.0
    }
}

/// The physical model: which statistics, which deformation, which dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSpec {
    pub statistics: Statistics,
    pub q: Deformation,
    pub dimension: Dimension,
}

impl GasSpec {
    pub fn new(statistics: Statistics, q: f64, dimension: Dimension) -> Result<Self> {
        Ok(GasSpec { statistics, q: Deformation::new(q)?, dimension })
    }

    pub fn boson(q: f64, dimension: Dimension) -> Result<Self> {
        Self::new(Statistics::Boson, q, dimension)
    }

    pub fn fermion(q: f64, dimension: Dimension) -> Result<Self> {
        Self::new(Statistics::Fermion, q, dimension)
    }

    pub fn q(&self) -> f64 {
        self.q.get()
    }

    /// Same gas with a different deformation.
    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.statistics, q, self.dimension)
    }
}

/// A point `(z, beta)` of the two-parameter manifold.
///
/// The geometric coordinates are `beta^1 = beta` and `beta^2 = gamma = -ln z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub z: f64,
    pub beta: f64,
}

impl ThermoPoint {
    pub fn new(z: f64, beta: f64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Domain(format!("fugacity z must be positive and finite, got {z}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("inverse temperature beta must be positive and finite, got {beta}")));
        }
        Ok(ThermoPoint { z, beta })
    }

    pub fn gamma(&self) -> f64 {
        -self.z.ln()
    }

    pub fn from_gamma(gamma: f64, beta: f64) -> Result<Self> {
        Self::new((-gamma).exp(), beta)
    }
}

/// Unit bookkeeping: `lambda = beta^(1/2)` and a configurable volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedUnits {
    pub volume: f64,
}

impl Default for ReducedUnits {
    fn default() -> Self {
        ReducedUnits { volume: 1.0 }
    }
}

impl ReducedUnits {
    pub fn thermal_wavelength(&self, beta: f64) -> f64 {
        beta.sqrt()
    }

    /// `lambda^D / volume`, the unit in which curvature values are reported.
    pub fn curvature_unit(&self, dimension: Dimension, beta: f64) -> f64 {
        beta.powf(dimension.beta_power()) / self.volume
    }
}

/// Deformed number `{x} = (1 - q^(2x)) / (1 - q^2)`.
///
/// Written as `expm1(2x ln q) / expm1(2 ln q)`, which stays accurate as
/// `q -> 1` and reduces to `x` exactly at `q = 1`.
pub fn q_bracket(x: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0, "q_bracket requires q > 0");
    let ln_q = q.ln();
    if ln_q == 0.0 {
        return x;
    }
    (2.0 * x * ln_q).exp_m1() / (2.0 * ln_q).exp_m1()
}

/// Checks that `(spec, z)` lies inside the domain where the partition sums converge.
///
/// Fermions accept every `z > 0`; bosons are restricted to `0 < z < 1`.
pub fn validate_domain(spec: &GasSpec, z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("fugacity z must be positive and finite, got {z}")));
    }
    if spec.statistics == Statistics::Boson && z >= 1.0 {
        return Err(Error::Domain(format!("boson fugacity must satisfy z < 1, got z = {z} (q = {})", spec.q())));
    }
    Ok(())
}

/// Same check for a full [`ThermoPoint`].
pub fn validate_point(spec: &GasSpec, point: &ThermoPoint) -> Result<()> {
    if !(point.beta.is_finite() && point.beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {}", point.beta)));
    }
    validate_domain(spec, point.z)
}
