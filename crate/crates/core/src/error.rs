use thiserror::Error;

/// Failure modes shared by every stage of a curvature evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("boson series did not converge after {terms} terms (x = {x}, z = {z}, q = {q})")]
    NonConvergence { terms: usize, x: f64, z: f64, q: f64 },

    #[error("quadrature tolerance not met: estimated error {achieved:e} exceeds requested {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    #[error("degenerate metric: denominator {0:e} is numerically zero")]
    DegenerateMetric(f64),

    #[error("finite-difference step too large: estimates disagree by {disagreement:e} (limit {limit:e})")]
    StepTooLarge { disagreement: f64, limit: f64 },

    #[error("density {density} is outside the second-order virial range")]
    OutOfVirialRange { density: f64 },

    #[error("root bracket [{lo}, {hi}] is invalid")]
    InvalidBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
