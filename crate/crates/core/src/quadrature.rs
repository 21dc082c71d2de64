//! Moment integrals `int_0^inf x^nu theta^k ln F(x, z) dx`, `k = 0..=3`.
//!
//! All four moments are integrated together on shared abscissae with an
//! adaptive 7/15-point Gauss–Kronrod scheme over `[0, x_max]`. The upper
//! limit is where every integrand has dropped below a small fraction of
//! `abs_tol`; the integrands decay at least like `exp(-x)` beyond it.
//! In three dimensions the substitution `x = u^2` removes the square-root
//! endpoint so every panel sees a smooth integrand.

use serde::{Deserialize, Serialize};

use crate::distributions::{log_moments, SeriesConfig};
use crate::error::{Error, Result};
use crate::params::{validate_domain, Dimension, GasSpec};

/// Kronrod abscissae on [0, 1] (the rule is symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const INITIAL_PANELS: usize = 8;
const TAIL_FRACTION: f64 = 1e-2;
const MAX_CUTOFF: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub series: SeriesConfig,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 200, series: SeriesConfig::default() }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Domain(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::Domain(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        Ok(())
    }
}

/// The reduced integrals `a, b, c, d` for one `(spec, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Largest absolute error estimate among the four integrals.
    pub est_error: f64,
    pub spec: GasSpec,
    pub z: f64,
}

impl MomentSet {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// One Kronrod panel: integral estimate and error estimate per component.
#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod_panel<const N: usize, F>(f: &F, lo: f64, hi: f64) -> Result<Panel<N>>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut samples = [[[0.0; N]; 2]; 7];
    for (j, s) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        s[0] = f(center - dx)?;
        s[1] = f(center + dx)?;
    }
    let f_center = f(center)?;

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for k in 0..N {
        let mut kronrod = WGK[7] * f_center[k];
        let mut gauss = WG[3] * f_center[k];
        let mut res_abs = (WGK[7] * f_center[k]).abs();
        for (j, s) in samples.iter().enumerate() {
            let pair = s[0][k] + s[1][k];
            kronrod += WGK[j] * pair;
            res_abs += WGK[j] * (s[0][k].abs() + s[1][k].abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        let mean = 0.5 * kronrod;
        let mut res_asc = WGK[7] * (f_center[k] - mean).abs();
        for (j, s) in samples.iter().enumerate() {
            res_asc += WGK[j] * ((s[0][k] - mean).abs() + (s[1][k] - mean).abs());
        }
        value[k] = kronrod * half;
        error[k] = rescale_error((kronrod - gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    }
    Ok(Panel { lo, hi, value, error })
}

/// Result of a vector-valued adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorIntegral<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub panels: usize,
}

/// Adaptive Gauss–Kronrod integration of a vector-valued integrand over a
/// finite interval. Every component must satisfy
/// `error <= max(abs_tol, rel_tol * |value|)`.
pub fn integrate_vector<const N: usize, F>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<VectorIntegral<N>>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let width = (hi - lo) / INITIAL_PANELS as f64;
    let mut panels = (0..INITIAL_PANELS)
        .map(|i| {
            let a = lo + width * i as f64;
            let b = if i + 1 == INITIAL_PANELS { hi } else { a + width };
            kronrod_panel(&f, a, b)
        })
        .collect::<Result<Vec<_>>>()?;

    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        for p in &panels {
            for k in 0..N {
                value[k] += p.value[k];
                error[k] += p.error[k];
            }
        }
        let target: [f64; N] = std::array::from_fn(|k| abs_tol.max(rel_tol * value[k].abs()));
        let converged = (0..N).all(|k| error[k] <= target[k]);
        if converged {
            return Ok(VectorIntegral { value, error, panels: panels.len() });
        }
        if panels.len() >= max_subdivisions {
            let (achieved, requested) = (0..N)
                .map(|k| (error[k], target[k]))
                .max_by(|x, y| (x.0 / x.1).total_cmp(&(y.0 / y.1)))
                .unwrap_or((0.0, 0.0));
            return Err(Error::ToleranceNotMet { achieved, requested });
        }

        // Bisect the panel contributing most to the worst-off components.
        let score = |p: &Panel<N>| (0..N).map(|k| p.error[k] / target[k]).fold(0.0, f64::max);
        let (worst, _) =
            panels.iter().enumerate().max_by(|a, b| score(a.1).total_cmp(&score(b.1))).expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(kronrod_panel(&f, p.lo, mid)?);
        panels.push(kronrod_panel(&f, mid, p.hi)?);
    }
}

/// Weighted integrands `x^nu theta^k ln F` at one abscissa.
fn weighted_moments(spec: &GasSpec, z: f64, x: f64, series: &SeriesConfig) -> Result<[f64; 4]> {
    let lm = log_moments(spec, x, z, series)?.as_array();
    let w = match spec.dimension {
        Dimension::D2 => 1.0,
        Dimension::D3 => x.sqrt(),
    };
    Ok(lm.map(|l| w * l))
}

/// Smallest grid point `x` past which every weighted integrand is negligible.
fn tail_cutoff(spec: &GasSpec, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let threshold = TAIL_FRACTION * cfg.abs_tol;
    let mut x = 16.0;
    while x < MAX_CUTOFF {
        let w = weighted_moments(spec, z, x, &cfg.series)?;
        if w.iter().all(|v| v.abs() < threshold) {
            return Ok(x);
        }
        x *= 1.25;
    }
    Err(Error::ToleranceNotMet { achieved: f64::INFINITY, requested: cfg.abs_tol })
}

/// Computes `a, b, c, d = int_0^inf x^nu theta^k ln F dx` for `k = 0..=3`.
pub fn moment_integrals(spec: &GasSpec, z: f64, cfg: &QuadratureConfig) -> Result<MomentSet> {
    validate_domain(spec, z)?;
    cfg.validate()?;
    let x_max = tail_cutoff(spec, z, cfg)?;

    let result = match spec.dimension {
        Dimension::D2 => integrate_vector(
            |x| weighted_moments(spec, z, x, &cfg.series),
            0.0,
            x_max,
            cfg.rel_tol,
            cfg.abs_tol,
            cfg.max_subdivisions,
        )?,
        // x = u^2: dx = 2u du and x^(1/2) = u.
        Dimension::D3 => integrate_vector(
            |u| {
                let lm = log_moments(spec, u * u, z, &cfg.series)?.as_array();
                Ok(lm.map(|l| 2.0 * u * u * l))
            },
            0.0,
            x_max.sqrt(),
            cfg.rel_tol,
            cfg.abs_tol,
            cfg.max_subdivisions,
        )?,
    };

    let [a, b, c, d] = result.value;
    let est_error = result.error.iter().copied().fold(0.0, f64::max);
    Ok(MomentSet { a, b, c, d, est_error, spec: *spec, z })
}
