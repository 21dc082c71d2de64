//! Thermodynamic geometry of SU_q(2)-invariant ideal boson and fermion gases.
//!
//! The crate evaluates the two-parameter Hessian metric of `ln Z` on the
//! `(beta, gamma = -ln z)` plane, its scalar curvature `R`, and the second
//! virial coefficients that decide whether a deformed gas behaves like
//! bosons (`R > 0`) or fermions (`R < 0`) in the dilute limit.
//!
//! ```
//! use suq_curvature::{curvature_closed_form, Dimension, GasSpec, Normalization, QuadratureConfig};
//!
//! let gas = GasSpec::boson(1.0, Dimension::D3).unwrap();
//! let r = curvature_closed_form(&gas, 0.5, Normalization::PaperFactor2, &QuadratureConfig::default()).unwrap();
//! assert!(r.r_reduced > 0.0);
//! ```

pub mod distributions;
pub mod error;
pub mod geometry;
pub mod params;
pub mod quadrature;
pub mod roots;
pub mod selfcheck;
pub mod sweep;
pub mod virial;

pub use distributions::{boson_theta_sums, fermion_h_sums, log_moments, LogMoments, SeriesConfig, ThetaSums};
pub use error::{Error, Result};
pub use geometry::{
    curvature_closed_form, curvature_for_moments, curvature_from_moments, curvature_sign_boundary,
    determinant_curvature_oracle, metric_tensor, CurvatureResult, GammaDerivative, MetricTensor, Normalization,
};
pub use params::{
    q_bracket, validate_domain, validate_point, Deformation, Dimension, GasSpec, ReducedUnits, Statistics, ThermoPoint,
};
pub use quadrature::{moment_integrals, MomentSet, QuadratureConfig};
pub use virial::{
    alpha, delta, eta, fugacity_from_density, virial_threshold, zeta_fermion_d2, VirialCoefficient, VirialKind,
};
