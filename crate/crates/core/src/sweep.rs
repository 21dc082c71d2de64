//! Parameter sweeps behind the command-line front end.
//!
//! A [`SweepRequest`] describes one grid. [`run_sweep`] evaluates it in
//! parallel and returns rows in grid order; [`write_output`] renders them as
//! CSV (header row, 17 significant digits) or as JSON with a metadata object.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{curvature_closed_form, Normalization};
use crate::params::{Dimension, GasSpec, Statistics};
use crate::quadrature::QuadratureConfig;
use crate::selfcheck::{run_selfcheck, SelfCheckReport};
use crate::virial::{alpha, delta, eta, zeta_fermion_d2, VirialKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    RvsZ,
    RvsQ,
    VirialCurves,
    SignTable,
    SelfCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A list of values or an evenly spaced inclusive range.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Range { lo: f64, hi: f64, points: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { lo, hi, points } => match points {
                0 => Vec::new(),
                1 => vec![*lo],
                n => (0..*n).map(|i| lo + (hi - lo) * i as f64 / (*n - 1) as f64).collect(),
            },
        }
    }

    /// Parses `a,b,c`, `lo:hi` (with `default_points`) or `lo:hi:n`.
    pub fn parse(text: &str, default_points: usize) -> Result<Self> {
        let bad = |what: &str| Error::Domain(format!("cannot parse grid '{text}': {what}"));
        let number = |s: &str| f64::from_str(s.trim()).map_err(|_| bad("not a number"));
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            let (lo, hi, points) = match parts.as_slice() {
                [lo, hi] => (number(lo)?, number(hi)?, default_points),
                [lo, hi, n] => (number(lo)?, number(hi)?, n.trim().parse().map_err(|_| bad("bad point count"))?),
                _ => return Err(bad("expected lo:hi or lo:hi:n")),
            };
            if lo.is_nan() || hi.is_nan() || lo > hi || points == 0 {
                return Err(bad("empty range"));
            }
            Ok(Grid::Range { lo, hi, points })
        } else {
            let values = text.split(',').map(number).collect::<Result<Vec<_>>>()?;
            if values.is_empty() {
                return Err(bad("empty list"));
            }
            Ok(Grid::List(values))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub mode: SweepMode,
    pub statistics: Option<Statistics>,
    pub dimension: Option<Dimension>,
    pub q: Option<Grid>,
    pub z: Option<Grid>,
    pub normalization: Normalization,
    pub format: OutputFormat,
    pub quadrature: QuadratureConfig,
}

impl SweepRequest {
    pub fn new(mode: SweepMode) -> Self {
        SweepRequest {
            mode,
            statistics: None,
            dimension: None,
            q: None,
            z: None,
            normalization: Normalization::PaperFactor2,
            format: OutputFormat::Csv,
            quadrature: QuadratureConfig::default(),
        }
    }

    fn gas(&self) -> Result<(Statistics, Dimension)> {
        match (self.statistics, self.dimension) {
            (Some(s), Some(d)) => Ok((s, d)),
            _ => Err(Error::Domain("curvature sweeps need both --stat and --dim".into())),
        }
    }

    fn q_values(&self, default: Grid) -> Vec<f64> {
        self.q.clone().unwrap_or(default).values()
    }

    fn z_values(&self, default: Grid) -> Vec<f64> {
        self.z.clone().unwrap_or(default).values()
    }

    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        for grid in [&self.q, &self.z].into_iter().flatten() {
            let values = grid.values();
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain("grids must be non-empty and finite".into()));
            }
        }
        if let Some(q) = &self.q {
            if q.values().iter().any(|&v| v <= 0.0) {
                return Err(Error::Domain("q values must be positive".into()));
            }
        }
        if matches!(self.mode, SweepMode::RvsZ | SweepMode::RvsQ) {
            self.gas()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub statistics: Statistics,
    #[serde(rename = "D")]
    pub dimension: u32,
    pub q: f64,
    pub z: f64,
    #[serde(rename = "R_reduced")]
    pub r_reduced: Option<f64>,
    pub normalization: &'static str,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VirialRow {
    pub q: f64,
    pub alpha: f64,
    pub delta: f64,
    pub eta: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignRow {
    pub statistics: Statistics,
    #[serde(rename = "D")]
    pub dimension: u32,
    pub q: f64,
    pub z: f64,
    pub regime: String,
    #[serde(rename = "R_reduced")]
    pub r_reduced: Option<f64>,
    pub sign: String,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub enum SweepOutput {
    Curvature(Vec<CurvatureRow>),
    Virial(Vec<VirialRow>),
    SignTable(Vec<SignRow>),
    SelfCheck(SelfCheckReport),
}

impl SweepOutput {
    /// True for curvature-like output where every point failed.
    pub fn all_points_failed(&self) -> bool {
        match self {
            SweepOutput::Curvature(rows) => !rows.is_empty() && rows.iter().all(|r| r.error.is_some()),
            SweepOutput::SignTable(rows) => !rows.is_empty() && rows.iter().all(|r| r.error.is_some()),
            _ => false,
        }
    }
}

fn default_z(mode: SweepMode, statistics: Statistics) -> Grid {
    match (mode, statistics) {
        (SweepMode::RvsZ, Statistics::Boson) => Grid::Range { lo: 0.02, hi: 0.98, points: 49 },
        (SweepMode::RvsZ, Statistics::Fermion) => Grid::Range { lo: 0.1, hi: 10.0, points: 100 },
        (_, Statistics::Boson) => Grid::List(vec![0.2, 0.5, 0.8]),
        (_, Statistics::Fermion) => Grid::List(vec![0.1, 0.5, 2.0, 10.0]),
    }
}

fn default_q(mode: SweepMode) -> Grid {
    match mode {
        SweepMode::RvsZ => Grid::List(vec![1.0]),
        _ => Grid::Range { lo: 0.2, hi: 5.0, points: 49 },
    }
}

fn curvature_row(
    statistics: Statistics,
    dimension: Dimension,
    q: f64,
    z: f64,
    normalization: Normalization,
    cfg: &QuadratureConfig,
) -> CurvatureRow {
    let result =
        GasSpec::new(statistics, q, dimension).and_then(|spec| curvature_closed_form(&spec, z, normalization, cfg));
    let (r_reduced, error) = match result {
        Ok(r) => (Some(r.r_reduced), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CurvatureRow {
        statistics,
        dimension: dimension.as_u32(),
        q,
        z,
        r_reduced,
        normalization: normalization.label(),
        error,
    }
}

/// q values probed by the sign table on either side of the dilute-limit threshold.
pub fn sign_table_defaults(statistics: Statistics, dimension: Dimension) -> Vec<f64> {
    match (statistics, dimension) {
        (Statistics::Boson, Dimension::D3) => vec![0.5, 1.0, 1.2, 1.35, 2.0],
        (Statistics::Fermion, Dimension::D3) => vec![0.5, 1.0, 1.9, 2.5],
        (Statistics::Boson, Dimension::D2) => vec![0.5, 1.0, 1.3, 1.5, 2.0],
        (Statistics::Fermion, Dimension::D2) => vec![0.5, 1.0, 2.0, 10.0],
    }
}

fn regime_label(statistics: Statistics, dimension: Dimension, q: f64) -> String {
    match VirialKind::for_gas(statistics, dimension).closed_form_threshold() {
        Some(t) if q < t => format!("q<{t:.3}"),
        Some(t) => format!("q>{t:.3}"),
        None => "all q".to_string(),
    }
}

pub fn run_sweep(req: &SweepRequest) -> Result<SweepOutput> {
    req.validate()?;
    let cfg = &req.quadrature;
    match req.mode {
        SweepMode::RvsZ | SweepMode::RvsQ => {
            let (statistics, dimension) = req.gas()?;
            let qs = req.q_values(default_q(req.mode));
            let zs = req.z_values(default_z(req.mode, statistics));
            // curvature-z: one curve per q; curvature-q: one curve per z
            let points: Vec<(f64, f64)> = match req.mode {
                SweepMode::RvsZ => qs.iter().flat_map(|&q| zs.iter().map(move |&z| (q, z))).collect(),
                _ => zs.iter().flat_map(|&z| qs.iter().map(move |&q| (q, z))).collect(),
            };
            let rows = points
                .par_iter()
                .map(|&(q, z)| curvature_row(statistics, dimension, q, z, req.normalization, cfg))
                .collect();
            Ok(SweepOutput::Curvature(rows))
        }
        SweepMode::VirialCurves => {
            let rows = req
                .q_values(default_q(req.mode))
                .into_iter()
                .map(|q| VirialRow { q, alpha: alpha(q), delta: delta(q), eta: eta(q), zeta: zeta_fermion_d2(q) })
                .collect();
            Ok(SweepOutput::Virial(rows))
        }
        SweepMode::SignTable => {
            let zs = req.z_values(Grid::List(vec![0.05]));
            let mut points = Vec::new();
            for dimension in [Dimension::D3, Dimension::D2] {
                if req.dimension.is_some_and(|d| d != dimension) {
                    continue;
                }
                for statistics in [Statistics::Boson, Statistics::Fermion] {
                    if req.statistics.is_some_and(|s| s != statistics) {
                        continue;
                    }
                    let qs = match &req.q {
                        Some(g) => g.values(),
                        None => sign_table_defaults(statistics, dimension),
                    };
                    for &z in &zs {
                        for &q in &qs {
                            points.push((statistics, dimension, q, z));
                        }
                    }
                }
            }
            let rows = points
                .par_iter()
                .map(|&(statistics, dimension, q, z)| {
                    let row = curvature_row(statistics, dimension, q, z, req.normalization, cfg);
                    let sign = match row.r_reduced {
                        Some(r) if r > 0.0 => "R>0",
                        Some(r) if r < 0.0 => "R<0",
                        Some(_) => "R=0",
                        None => "error",
                    };
                    SignRow {
                        statistics,
                        dimension: dimension.as_u32(),
                        q,
                        z,
                        regime: regime_label(statistics, dimension, q),
                        r_reduced: row.r_reduced,
                        sign: sign.to_string(),
                        error: row.error,
                    }
                })
                .collect();
            Ok(SweepOutput::SignTable(rows))
        }
        SweepMode::SelfCheck => Ok(SweepOutput::SelfCheck(run_selfcheck(cfg))),
    }
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

#[derive(Serialize)]
struct Metadata<'a> {
    version: &'a str,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
    series_tol: f64,
    normalization: &'static str,
    units: &'static str,
}

#[derive(Serialize)]
struct JsonDocument<'a, T: Serialize> {
    metadata: Metadata<'a>,
    records: &'a T,
}

pub fn write_output<W: Write>(req: &SweepRequest, output: &SweepOutput, out: W) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Domain(format!("write failed: {e}"));
    match req.format {
        OutputFormat::Csv => write_csv(output, out),
        OutputFormat::Json => {
            let metadata = Metadata {
                version: env!("CARGO_PKG_VERSION"),
                rel_tol: req.quadrature.rel_tol,
                abs_tol: req.quadrature.abs_tol,
                max_subdivisions: req.quadrature.max_subdivisions,
                series_tol: req.quadrature.series.tol,
                normalization: req.normalization.label(),
                units: "lambda^D / volume",
            };
            let mut out = out;
            let json = match output {
                SweepOutput::Curvature(rows) => serde_json::to_string_pretty(&JsonDocument { metadata, records: rows }),
                SweepOutput::Virial(rows) => serde_json::to_string_pretty(&JsonDocument { metadata, records: rows }),
                SweepOutput::SignTable(rows) => serde_json::to_string_pretty(&JsonDocument { metadata, records: rows }),
                SweepOutput::SelfCheck(report) => {
                    serde_json::to_string_pretty(&JsonDocument { metadata, records: &report.outcomes })
                }
            }
            .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
            writeln!(out, "{json}").map_err(io_err)
        }
    }
}

fn write_csv<W: Write>(output: &SweepOutput, out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Domain(format!("write failed: {e}"));
    if let SweepOutput::SelfCheck(report) = output {
        let mut out = out;
        return out.write_all(report.render().as_bytes()).map_err(|e| Error::Domain(format!("write failed: {e}")));
    }
    let mut w = csv::Writer::from_writer(out);
    match output {
        SweepOutput::Curvature(rows) => {
            w.write_record(["statistics", "D", "q", "z", "R_reduced", "normalization", "error"]).map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.statistics.to_string(),
                    r.dimension.to_string(),
                    format_float(r.q),
                    format_float(r.z),
                    opt_float(r.r_reduced),
                    r.normalization.to_string(),
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
        }
        SweepOutput::Virial(rows) => {
            w.write_record(["q", "alpha", "delta", "eta", "zeta"]).map_err(csv_err)?;
            for r in rows {
                w.write_record([r.q, r.alpha, r.delta, r.eta, r.zeta].map(format_float)).map_err(csv_err)?;
            }
        }
        SweepOutput::SignTable(rows) => {
            w.write_record(["statistics", "D", "q", "z", "regime", "R_reduced", "sign", "error"]).map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.statistics.to_string(),
                    r.dimension.to_string(),
                    format_float(r.q),
                    format_float(r.z),
                    r.regime.clone(),
                    opt_float(r.r_reduced),
                    r.sign.clone(),
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
        }
        SweepOutput::SelfCheck(_) => unreachable!("handled above"),
    }
    w.flush().map_err(|e| Error::Domain(format!("write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(Grid::parse("0.5,1,2", 10).unwrap(), Grid::List(vec![0.5, 1.0, 2.0]));
        let g = Grid::parse("0.02:0.98", 49).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 49);
        assert!((v[0] - 0.02).abs() < 1e-15 && (v[48] - 0.98).abs() < 1e-15);
        assert_eq!(Grid::parse("1:2:3", 10).unwrap().values(), vec![1.0, 1.5, 2.0]);
        assert!(Grid::parse("2:1", 5).is_err());
        assert!(Grid::parse("a,b", 5).is_err());
        assert!(Grid::parse("1:2:x", 5).is_err());
    }

    #[test]
    fn curvature_sweep_records_domain_errors() {
        let mut req = SweepRequest::new(SweepMode::RvsZ);
        req.statistics = Some(Statistics::Boson);
        req.dimension = Some(Dimension::D3);
        req.q = Some(Grid::List(vec![1.0]));
        req.z = Some(Grid::List(vec![0.5, 1.5]));
        let SweepOutput::Curvature(rows) = run_sweep(&req).unwrap() else { panic!() };
        assert_eq!(rows.len(), 2);
        assert!(rows[0].r_reduced.unwrap() > 0.0 && rows[0].error.is_none());
        assert!(rows[1].r_reduced.is_none() && rows[1].error.is_some());
    }

    #[test]
    fn missing_gas_is_rejected() {
        let req = SweepRequest::new(SweepMode::RvsQ);
        assert!(run_sweep(&req).is_err());
    }

    #[test]
    fn virial_rows() {
        let mut req = SweepRequest::new(SweepMode::VirialCurves);
        req.q = Some(Grid::List(vec![1.0]));
        let SweepOutput::Virial(rows) = run_sweep(&req).unwrap() else { panic!() };
        assert_eq!(rows[0].eta, -0.125);
    }

    #[test]
    fn regime_labels() {
        assert_eq!(regime_label(Statistics::Boson, Dimension::D3, 1.0), "q<1.273");
        assert_eq!(regime_label(Statistics::Boson, Dimension::D2, 2.0), "q>1.414");
        assert_eq!(regime_label(Statistics::Fermion, Dimension::D2, 2.0), "all q");
    }
}
