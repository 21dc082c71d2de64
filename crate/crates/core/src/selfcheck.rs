//! Cross-validation runs used by the `selfcheck` command.
//!
//! The reference values in [`oracle`] come from routes that share nothing
//! with the production path: plain power series for `|z| < 1`, and for
//! fermions at `z >= 1` a double-exponential quadrature of the Fermi
//! occupation rather than of `ln h`.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{
    curvature_closed_form, determinant_curvature_oracle, GammaDerivative, MetricTensor, Normalization,
};
use crate::params::{Dimension, GasSpec};
use crate::quadrature::{moment_integrals, QuadratureConfig};
use crate::virial::{alpha, delta, eta, virial_threshold, VirialKind};

pub mod oracle {
    use std::f64::consts::PI;

    use crate::params::{Dimension, GasSpec, Statistics};

    /// `Li_s(z) = sum_k z^k / k^s` for `|z| < 1`.
    pub fn polylog_series(s: f64, z: f64) -> f64 {
        assert!(z.abs() < 1.0, "series needs |z| < 1");
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 1..1_000_000u32 {
            power *= z;
            let term = power / f64::from(k).powf(s);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() && k > 10 {
                break;
            }
        }
        sum
    }

    fn gamma_half_integer(s: f64) -> f64 {
        // Gamma(1/2) = sqrt(pi), Gamma(n + 1) = n Gamma(n)
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x + 0.5 < s + 1e-12 {
            g *= x;
            x += 1.0;
        }
        g
    }

    /// Double-exponential (exp-sinh) quadrature on `(0, inf)`.
    fn exp_sinh<F: Fn(f64) -> f64>(f: F) -> f64 {
        let h = 1.0 / 64.0;
        let mut sum = 0.0;
        for k in -320i32..=320 {
            let u = f64::from(k) * h;
            let t = (0.5 * PI * u.sinh()).exp();
            let dt = t * 0.5 * PI * u.cosh();
            if t.is_finite() && dt.is_finite() {
                let v = f(t) * dt;
                if v.is_finite() {
                    sum += v;
                }
            }
        }
        sum * h
    }

    /// `-Li_s(-z)` for `s` in `{5/2, 3/2, 1/2, -1/2}` and any `z > 0`.
    pub fn fermi_dirac_half(s: f64, z: f64) -> f64 {
        if z < 0.5 {
            return -polylog_series(s, -z);
        }
        let ln_z = z.ln();
        let occupation = |t: f64| 1.0 / ((t - ln_z).exp() + 1.0);
        if s > 0.0 {
            exp_sinh(|t| t.powf(s - 1.0) * occupation(t)) / gamma_half_integer(s)
        } else {
            // theta n = n (1 - n) lowers the index by one
            exp_sinh(|t| {
                let n = occupation(t);
                t.powf(s) * n * (1.0 - n)
            }) / gamma_half_integer(s + 1.0)
        }
    }

    /// `-Li_s(-z)` for `s` in `{2, 1, 0, -1}` and any `z > 0`, in closed form.
    pub fn fermi_dirac_integer(s: i32, z: f64) -> f64 {
        match s {
            2 => {
                if z < 1.0 {
                    -polylog_series(2.0, -z)
                } else {
                    // Li_2(-z) = -pi^2/6 - ln^2(z)/2 - Li_2(-1/z)
                    let l = z.ln();
                    PI * PI / 6.0 + 0.5 * l * l + polylog_series(2.0, -1.0 / z)
                }
            }
            1 => z.ln_1p(),
            0 => z / (1.0 + z),
            -1 => z / ((1.0 + z) * (1.0 + z)),
            _ => panic!("unsupported index {s}"),
        }
    }

    /// Bose polylogarithms for `s` in `{2, 1, 0, -1}` via closed forms, or the
    /// series otherwise.
    fn bose(s: f64, z: f64) -> f64 {
        match s as i32 {
            1 if s == 1.0 => -(-z).ln_1p(),
            0 if s == 0.0 => z / (1.0 - z),
            -1 if s == -1.0 => z / ((1.0 - z) * (1.0 - z)),
            _ => polylog_series(s, z),
        }
    }

    /// `(a, b, c, d)` at `q = 1`: `2 Gamma(nu + 1)` times the polylogarithms
    /// of index `nu + 2 - k`, signed for the statistics.
    pub fn q1_moments(spec: &GasSpec, z: f64) -> [f64; 4] {
        let nu = spec.dimension.nu();
        let prefactor = match spec.dimension {
            Dimension::D2 => 2.0,
            Dimension::D3 => PI.sqrt(),
        };
        std::array::from_fn(|k| {
            let s = nu + 2.0 - k as f64;
            let li = match (spec.statistics, spec.dimension) {
                (Statistics::Boson, _) => bose(s, z),
                (Statistics::Fermion, Dimension::D3) => fermi_dirac_half(s, z),
                (Statistics::Fermion, Dimension::D2) => fermi_dirac_integer(s as i32, z),
            };
            prefactor * li
        })
    }
}

/// One pass/fail line of a check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        CheckOutcome { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn render(&self) -> String {
        self.outcomes
            .iter()
            .map(|o| format!("[{}] {}: {}\n", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail))
            .collect()
    }
}

/// Boson `q in {0.5, 1, 1.15, 2}`, `z in {0.1, 0.5, 0.9}`; fermion
/// `q in {0.5, 1, 10}`, `z in {0.1, 1, 10}`; both dimensions.
pub fn validation_grid() -> Vec<(GasSpec, f64)> {
    let mut grid = Vec::new();
    for dim in [Dimension::D3, Dimension::D2] {
        for q in [0.5, 1.0, 1.15, 2.0] {
            for z in [0.1, 0.5, 0.9] {
                grid.push((GasSpec::boson(q, dim).expect("valid q"), z));
            }
        }
        for q in [0.5, 1.0, 10.0] {
            for z in [0.1, 1.0, 10.0] {
                grid.push((GasSpec::fermion(q, dim).expect("valid q"), z));
            }
        }
    }
    grid
}

pub fn relative_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Closed-form curvature (raw) against the determinant oracle on the grid.
pub fn check_oracle_agreement(cfg: &QuadratureConfig, tol: f64) -> CheckOutcome {
    let results: Vec<_> = validation_grid()
        .par_iter()
        .map(|(spec, z)| {
            let closed = curvature_closed_form(spec, *z, Normalization::Raw, cfg)?.r_reduced;
            let oracle = determinant_curvature_oracle(spec, 1.0, *z, GammaDerivative::Ladder, cfg)?;
            Ok::<_, crate::Error>(relative_difference(closed, oracle))
        })
        .collect();
    summarize("closed form vs determinant oracle", results, tol)
}

/// q = 1 moments against polylogarithm values.
pub fn check_polylog(cfg: &QuadratureConfig, tol: f64) -> CheckOutcome {
    let mut cases = Vec::new();
    for dim in [Dimension::D3, Dimension::D2] {
        for z in [0.1, 0.5, 0.9] {
            cases.push((GasSpec::boson(1.0, dim).expect("valid q"), z));
        }
        for z in [0.5, 2.0, 10.0] {
            cases.push((GasSpec::fermion(1.0, dim).expect("valid q"), z));
        }
    }
    let results: Vec<_> = cases
        .par_iter()
        .map(|(spec, z)| {
            let m = moment_integrals(spec, *z, cfg)?.as_array();
            let reference = oracle::q1_moments(spec, *z);
            Ok(m.iter().zip(reference).map(|(v, r)| relative_difference(*v, r)).fold(0.0, f64::max))
        })
        .collect();
    summarize("q=1 moments vs polylogarithms", results, tol)
}

/// Bisection roots against closed forms, plus coefficient values at `q = 1`.
pub fn check_virial(tol_root: f64, tol_value: f64) -> CheckOutcome {
    let mut worst_root: f64 = 0.0;
    let mut detail = String::new();
    for kind in [VirialKind::AlphaQgfD3, VirialKind::DeltaQgbD3, VirialKind::EtaQgbD2] {
        let (Some(b), Some(c)) = (virial_threshold(kind), kind.closed_form_threshold()) else {
            return CheckOutcome::new("virial thresholds", false, format!("{kind:?}: no root"));
        };
        worst_root = worst_root.max((b - c).abs());
        detail.push_str(&format!("{kind:?} root {b:.8}; "));
    }
    let zeta_none = virial_threshold(VirialKind::ZetaQgfD2).is_none();
    let v = 1.0 / (8.0 * 2f64.sqrt());
    let worst_value = (alpha(1.0) - v).abs().max((delta(1.0) + v).abs()).max((eta(1.0) + 0.125).abs());
    let passed = worst_root <= tol_root && worst_value <= tol_value && zeta_none;
    detail.push_str(&format!("max root error {worst_root:.2e}, max value error {worst_value:.2e}"));
    CheckOutcome::new("virial thresholds", passed, detail)
}

/// Positive-definiteness of the metric on the validation grid.
pub fn check_metric_validity(cfg: &QuadratureConfig) -> CheckOutcome {
    let results: Vec<_> = validation_grid()
        .par_iter()
        .map(|(spec, z)| {
            let m = moment_integrals(spec, *z, cfg)?;
            Ok(MetricTensor::from_moments(&m, 1.0).is_positive_definite())
        })
        .collect::<Vec<crate::Result<bool>>>();
    let failures = results.iter().filter(|r| !matches!(r, Ok(true))).count();
    CheckOutcome::new(
        "metric positive definite",
        failures == 0,
        format!("{} points, {failures} failures", results.len()),
    )
}

/// Reduced curvature from the oracle at `beta = 1` and `beta = 2`.
pub fn check_beta_independence(cfg: &QuadratureConfig, tol: f64) -> CheckOutcome {
    let points = [
        (GasSpec::boson(0.5, Dimension::D3), 0.5),
        (GasSpec::boson(1.15, Dimension::D3), 0.9),
        (GasSpec::boson(2.0, Dimension::D2), 0.1),
        (GasSpec::fermion(1.0, Dimension::D3), 1.0),
        (GasSpec::fermion(10.0, Dimension::D2), 10.0),
        (GasSpec::fermion(0.5, Dimension::D2), 0.1),
    ];
    let results: Vec<_> = points
        .par_iter()
        .map(|(spec, z)| {
            let spec = spec.clone()?;
            let r1 = determinant_curvature_oracle(&spec, 1.0, *z, GammaDerivative::Ladder, cfg)?;
            let r2 = determinant_curvature_oracle(&spec, 2.0, *z, GammaDerivative::Ladder, cfg)?;
            Ok(relative_difference(r1, r2))
        })
        .collect();
    summarize("beta independence", results, tol)
}

fn summarize(name: &str, results: Vec<crate::Result<f64>>, tol: f64) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for r in &results {
        match r {
            Ok(v) => worst = worst.max(*v),
            Err(e) => errors.push(e.to_string()),
        }
    }
    let passed = errors.is_empty() && worst <= tol;
    let mut detail = format!("{} points, max rel. diff {worst:.2e} (tol {tol:.0e})", results.len());
    if let Some(e) = errors.first() {
        detail.push_str(&format!(", {} errors, first: {e}", errors.len()));
    }
    CheckOutcome::new(name, passed, detail)
}

/// Runs the full battery.
pub fn run_selfcheck(cfg: &QuadratureConfig) -> SelfCheckReport {
    SelfCheckReport {
        outcomes: vec![
            check_oracle_agreement(cfg, 1e-5),
            check_polylog(cfg, 1e-8),
            check_virial(1e-6, 1e-10),
            check_metric_validity(cfg),
            check_beta_independence(cfg, 1e-8),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;

    #[test]
    fn oracle_reference_values() {
        // mpmath polylog at 30 digits
        let cases = [
            (2.5, 2.0, 1.564_981_374_460_088_5),
            (2.5, 10.0, 5.088_775_864_187_183),
            (1.5, 2.0, 1.281_380_383_159_769_6),
            (1.5, 10.0, 3.285_684_082_333_893),
            (0.5, 2.0, 0.891_288_711_552_123_3),
            (0.5, 10.0, 1.588_285_137_889_134_4),
            (-0.5, 2.0, 0.437_480_888_580_233_95),
            (-0.5, 10.0, 0.401_105_572_804_53),
            (-0.5, 0.5, 0.283_012_810_746_506),
        ];
        for (s, z, v) in cases {
            let got = fermi_dirac_half(s, z);
            assert!((got - v).abs() < 1e-13 * v, "s={s} z={z}: {got} vs {v}");
        }
        assert!((polylog_series(2.5, 0.9) - 1.139_003_025_202_156_8).abs() < 1e-14);
        assert!((polylog_series(-0.5, 0.9) - 25.708_466_702_797_59).abs() < 1e-11);
        // Li_2(1/2) = pi^2/12 - ln^2(2)/2
        let l2 = std::f64::consts::PI.powi(2) / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((polylog_series(2.0, 0.5) - l2).abs() < 1e-15);
    }

    #[test]
    fn inversion_formula_is_continuous() {
        let below = fermi_dirac_integer(2, 1.0 - 1e-9);
        let above = fermi_dirac_integer(2, 1.0 + 1e-9);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn grid_has_every_point() {
        assert_eq!(validation_grid().len(), 42);
    }
}
