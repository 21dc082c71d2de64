//! Second-order fugacity–density relations and their coefficients.
//!
//! Each relation has the form `z = c1 n + coeff(q) n^2` in reduced units
//! (`lambda = 1`). A positive `coeff` raises the fugacity needed for a
//! given density, i.e. effective repulsion: the gas behaves as fermions.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Dimension, GasSpec, Statistics};
use crate::roots::bisect_sign_change;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VirialKind {
    /// Fermions in three dimensions.
    AlphaQgfD3,
    /// Bosons in three dimensions.
    DeltaQgbD3,
    /// Bosons in two dimensions.
    EtaQgbD2,
    /// Fermions in two dimensions.
    ZetaQgfD2,
}

impl VirialKind {
    pub const ALL: [VirialKind; 4] =
        [VirialKind::AlphaQgfD3, VirialKind::DeltaQgbD3, VirialKind::EtaQgbD2, VirialKind::ZetaQgfD2];

    pub fn for_gas(statistics: Statistics, dimension: Dimension) -> Self {
        match (statistics, dimension) {
            (Statistics::Fermion, Dimension::D3) => VirialKind::AlphaQgfD3,
            (Statistics::Boson, Dimension::D3) => VirialKind::DeltaQgbD3,
            (Statistics::Boson, Dimension::D2) => VirialKind::EtaQgbD2,
            (Statistics::Fermion, Dimension::D2) => VirialKind::ZetaQgfD2,
        }
    }

    pub fn evaluate(self, q: f64) -> f64 {
        match self {
            VirialKind::AlphaQgfD3 => alpha(q),
            VirialKind::DeltaQgbD3 => delta(q),
            VirialKind::EtaQgbD2 => eta(q),
            VirialKind::ZetaQgfD2 => zeta_fermion_d2(q),
        }
    }

    /// Analytic root in `q`, if the coefficient changes sign at all.
    pub fn closed_form_threshold(self) -> Option<f64> {
        match self {
            VirialKind::AlphaQgfD3 => Some((2f64.cbrt() - 1.0).powf(-0.5)),
            VirialKind::DeltaQgbD3 => Some(((3.0 * SQRT_2).powf(2.0 / 3.0) - 1.0).sqrt()),
            VirialKind::EtaQgbD2 => Some(SQRT_2),
            VirialKind::ZetaQgfD2 => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirialCoefficient {
    pub kind: VirialKind,
    pub value: f64,
    pub q: f64,
}

impl VirialCoefficient {
    pub fn new(kind: VirialKind, q: f64) -> Self {
        VirialCoefficient { kind, value: kind.evaluate(q), q }
    }

    pub fn is_fermionic(&self) -> bool {
        self.value > 0.0
    }
}

/// `alpha(q) = (1/2) (2^(-3/2) - 1 / (2 (q^-2 + 1)^(3/2)))`
pub fn alpha(q: f64) -> f64 {
    0.5 * (2f64.powf(-1.5) - 0.5 / (1.0 / (q * q) + 1.0).powf(1.5))
}

/// `delta(q) = -(1/4) (3 / (1 + q^2)^(3/2) - 1/sqrt(2))`
pub fn delta(q: f64) -> f64 {
    -0.25 * (3.0 / (1.0 + q * q).powf(1.5) - 1.0 / SQRT_2)
}

/// `eta(q) = -(2 - q^2) / (4 (1 + q^2))`
pub fn eta(q: f64) -> f64 {
    -(2.0 - q * q) / (4.0 * (1.0 + q * q))
}

/// `zeta(q) = 1 / (4 (1 + q^2))`: two-dimensional fermions.
///
/// From `int_0^inf ln h dx = 2z - z^2 / (1 + q^2) + O(z^3)`, inverted with
/// the same steps that give `eta` for bosons. Positive for every `q`.
pub fn zeta_fermion_d2(q: f64) -> f64 {
    1.0 / (4.0 * (1.0 + q * q))
}

/// Bisection root of the coefficient on `q in [0.5, 5]` to `1e-8`.
pub fn virial_threshold(kind: VirialKind) -> Option<f64> {
    bisect_sign_change(|q| Ok(kind.evaluate(q)), 0.5, 5.0, 1e-8).expect("virial coefficients are total on [0.5, 5]")
}

/// Inverts the printed second-order relation `z(n)` for the matching gas.
///
/// Fails when the `n^2` term exceeds half of the linear term.
pub fn fugacity_from_density(spec: &GasSpec, density: f64) -> Result<f64> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::Domain(format!("density must be positive, got {density}")));
    }
    let kind = VirialKind::for_gas(spec.statistics, spec.dimension);
    let coeff = kind.evaluate(spec.q());
    let (linear, quadratic) = match kind {
        VirialKind::AlphaQgfD3 => {
            (density / (PI.powf(1.5) * 2f64.powf(2.5)), coeff * density * density / (PI * PI * 16.0))
        }
        _ => (0.5 * density, coeff * density * density),
    };
    if quadratic.abs() >= 0.5 * linear {
        return Err(Error::OutOfVirialRange { density });
    }
    Ok(linear + quadratic)
}
