//! Single-mode grand partition functions and their fugacity moments.
//!
//! For a mode of reduced energy `x = beta * eps` the boson and fermion
//! partition functions are
//!
//! ```text
//! f(x, z) = sum_{m>=0} (m + 1) exp(-x {m}) z^m
//! h(x, z) = 1 + 2 exp(-x) z + exp(-(q^-2 + 1) x) z^2
//! ```
//!
//! Derivatives are taken with `theta = z d/dz = -d/dgamma`, which acts on
//! the `z^m` term as multiplication by `m`. `F_k = theta^k F` is returned for
//! `k = 0..=3`, and [`log_moments`] turns those into the cumulants
//! `theta^k ln F`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{q_bracket, validate_domain, GasSpec, Statistics};

/// Raw power sums `theta^k F` for `k = 0..=3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSums(pub [f64; 4]);

/// Cumulants of the occupation number of one mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMoments {
    /// `ln F`
    pub l0: f64,
    /// `theta ln F`, the mean occupation
    pub l1: f64,
    /// `theta^2 ln F`, the variance
    pub l2: f64,
    /// `theta^3 ln F`, the third cumulant
    pub l3: f64,
}

impl LogMoments {
    pub fn as_array(&self) -> [f64; 4] {
        [self.l0, self.l1, self.l2, self.l3]
    }

    fn from_sums(sums: &ThetaSums) -> Self {
        let [f0, f1, f2, f3] = sums.0;
        let m1 = f1 / f0;
        let m2 = f2 / f0;
        let m3 = f3 / f0;
        LogMoments { l0: f0.ln(), l1: m1, l2: m2 - m1 * m1, l3: m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1 }
    }
}

/// Truncation controls for the boson series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Relative bound on the neglected tail of every `F_k`.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-15, max_terms: 1_000_000 }
    }
}

/// Sums `F_k = sum_m (m + 1) m^k exp(-x {m}) z^m` for `k = 0..=3`.
///
/// The loop stops once a geometric bound on the remaining tail of every
/// `F_k` falls below `cfg.tol * F_k`. The bound uses the largest ratio the
/// remaining terms can have: for `q >= 1` the ratio only shrinks with `m`,
/// for `q < 1` it stays below `z` times the polynomial factor.
pub fn boson_theta_sums(x: f64, z: f64, q: f64, cfg: &SeriesConfig) -> Result<ThetaSums> {
    if !(x >= 0.0 && z > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!("boson sums need x >= 0, z > 0, q > 0 (x={x}, z={z}, q={q})")));
    }
    let ln_z = z.ln();
    let q2 = q * q;
    let mut sums = [1.0, 0.0, 0.0, 0.0];

    for m in 1..cfg.max_terms {
        let mf = m as f64;
        let level = if x == 0.0 { 0.0 } else { x * q_bracket(mf, q) };
        let exponent = (mf + 1.0).ln() - level + mf * ln_z;
        let term = exponent.exp();
        let mut weighted = [term; 4];
        for k in 1..4 {
            weighted[k] = weighted[k - 1] * mf;
        }
        for (s, w) in sums.iter_mut().zip(weighted) {
            *s += w;
        }

        // ratio t_{j+1}/t_j for j >= m, maximised over the remaining tail
        let spacing = if q >= 1.0 && x > 0.0 { (-x * q2.powf(mf)).exp() } else { 1.0 };
        let poly = (mf + 2.0) / (mf + 1.0) * ((mf + 1.0) / mf).powi(3);
        let rho = poly * z * spacing;
        if rho < 1.0 {
            let tail_factor = rho / (1.0 - rho);
            let done = weighted.iter().zip(sums.iter()).all(|(w, s)| w * tail_factor <= cfg.tol * s);
            if done {
                return Ok(ThetaSums(sums));
            }
        }
    }

    Err(Error::NonConvergence { terms: cfg.max_terms, x, z, q })
}

/// Closed-form `theta^k h` for the two-state fermion pair.
pub fn fermion_h_sums(x: f64, z: f64, q: f64) -> ThetaSums {
    let [w0, w1, w2] = fermion_weights(x, z, q);
    ThetaSums([w0 + w1 + w2, w1 + 2.0 * w2, w1 + 4.0 * w2, w1 + 8.0 * w2])
}

/// Unnormalised weights of occupation 0, 1 and 2.
fn fermion_weights(x: f64, z: f64, q: f64) -> [f64; 3] {
    let single = 2.0 * (-x).exp() * z;
    let pair = (-(1.0 / (q * q) + 1.0) * x).exp() * z * z;
    [1.0, single, pair]
}

/// Fermion cumulants from central moments of the three-point occupation
/// distribution. Avoids the cancellation in `m3 - 3 m1 m2 + 2 m1^3` when
/// the doubly occupied state dominates (large z).
fn fermion_log_moments(x: f64, z: f64, q: f64) -> LogMoments {
    let w = fermion_weights(x, z, q);
    let total: f64 = w.iter().sum();
    let p = w.map(|wi| wi / total);
    let mean = p[1] + 2.0 * p[2];
    let mut var = 0.0;
    let mut skew = 0.0;
    for (n, pn) in p.iter().enumerate() {
        let dev = n as f64 - mean;
        var += pn * dev * dev;
        skew += pn * dev * dev * dev;
    }
    let l0 = (w[1] + w[2]).ln_1p();
    LogMoments { l0, l1: mean, l2: var, l3: skew }
}

/// `theta^k ln F` at one abscissa for the gas described by `spec`.
pub fn log_moments(spec: &GasSpec, x: f64, z: f64, series: &SeriesConfig) -> Result<LogMoments> {
    validate_domain(spec, z)?;
    match spec.statistics {
        Statistics::Boson => {
            let sums = boson_theta_sums(x, z, spec.q(), series)?;
            Ok(LogMoments::from_sums(&sums))
        }
        Statistics::Fermion => Ok(fermion_log_moments(x, z, spec.q())),
    }
}
