//! One test per acceptance criterion. Each prints a single
//! `[PASS]` or `[FAIL]` line (run with `--nocapture` to see them) and
//! then asserts on the same verdict.

use std::process::Command;
use std::time::{Duration, Instant};

use suq_curvature::selfcheck::oracle::q1_moments;
use suq_curvature::selfcheck::{relative_difference, validation_grid};
use suq_curvature::{
    alpha, curvature_closed_form, curvature_sign_boundary, delta, determinant_curvature_oracle, eta, metric_tensor,
    moment_integrals, virial_threshold, Dimension, GammaDerivative, GasSpec, Normalization, QuadratureConfig,
    Statistics, VirialKind,
};

const ORACLE_TOL: f64 = 1e-5;
const POLYLOG_TOL: f64 = 1e-8;
const ROOT_TOL: f64 = 1e-6;
const VALUE_TOL: f64 = 1e-10;
const BOUNDARY_TOL: f64 = 0.1;
const PLATEAU_TOL: f64 = 0.10;
const BETA_TOL: f64 = 1e-8;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn verdict(n: u32, passed: bool, detail: String) {
    println!("[{}] criterion {n}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {n} failed: {detail}");
}

fn r_default(stat: Statistics, q: f64, dim: Dimension, z: f64) -> f64 {
    let spec = GasSpec::new(stat, q, dim).unwrap();
    curvature_closed_form(&spec, z, Normalization::PaperFactor2, &cfg()).unwrap().r_reduced
}

#[test]
fn criterion_01_oracle_agreement() {
    let start = Instant::now();
    let grid = validation_grid();
    let mut worst: f64 = 0.0;
    for (spec, z) in &grid {
        let closed = curvature_closed_form(spec, *z, Normalization::Raw, &cfg()).unwrap().r_reduced;
        let oracle = determinant_curvature_oracle(spec, 1.0, *z, GammaDerivative::Ladder, &cfg()).unwrap();
        worst = worst.max(relative_difference(closed, oracle));
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        worst <= ORACLE_TOL && elapsed < Duration::from_secs(30),
        format!("{} points, max rel. diff {worst:.2e} (tol {ORACLE_TOL:.0e}), {elapsed:.2?}", grid.len()),
    );
}

#[test]
fn criterion_02_polylog_oracle() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for dim in [Dimension::D3, Dimension::D2] {
        for (stat, zs) in [(Statistics::Boson, [0.1, 0.5, 0.9]), (Statistics::Fermion, [0.5, 2.0, 10.0])] {
            let spec = GasSpec::new(stat, 1.0, dim).unwrap();
            for z in zs {
                let m = moment_integrals(&spec, z, &cfg()).unwrap().as_array();
                for (v, r) in m.iter().zip(q1_moments(&spec, z)) {
                    worst = worst.max(relative_difference(*v, r));
                }
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        2,
        worst <= POLYLOG_TOL && elapsed < Duration::from_secs(5),
        format!("{count} cases, max rel. diff {worst:.2e} (tol {POLYLOG_TOL:.0e}), {elapsed:.2?}"),
    );
}

#[test]
fn criterion_03_sign_tables() {
    use Dimension::{D2, D3};
    use Statistics::{Boson, Fermion};
    let table: [(Statistics, Dimension, &[f64], &[f64]); 4] = [
        (Boson, D3, &[0.5, 1.0, 1.2], &[1.35, 2.0]),
        (Fermion, D3, &[2.5], &[0.5, 1.0, 1.9]),
        (Boson, D2, &[0.5, 1.0, 1.3], &[1.5, 2.0]),
        (Fermion, D2, &[], &[0.5, 1.0, 2.0, 10.0]),
    ];
    let mut mismatches = Vec::new();
    let mut total = 0;
    for (stat, dim, positive, negative) in table {
        for (qs, want_positive) in [(positive, true), (negative, false)] {
            for &q in qs {
                total += 1;
                let r = r_default(stat, q, dim, 0.05);
                if (r > 0.0) != want_positive {
                    mismatches.push(format!("{stat:?} {dim:?} q={q}: R={r:.3e}"));
                }
            }
        }
    }
    verdict(3, mismatches.is_empty(), format!("{total} signs at z=0.05, mismatches: {mismatches:?}"));
}

#[test]
fn criterion_04_virial_thresholds() {
    let expected = [
        (VirialKind::AlphaQgfD3, (2f64.cbrt() - 1.0).powf(-0.5)),
        (VirialKind::DeltaQgbD3, ((3.0 * 2f64.sqrt()).powf(2.0 / 3.0) - 1.0).sqrt()),
        (VirialKind::EtaQgbD2, 2f64.sqrt()),
    ];
    let mut worst_root: f64 = 0.0;
    let mut roots = Vec::new();
    for (kind, closed) in expected {
        let root = virial_threshold(kind).unwrap_or(f64::NAN);
        roots.push(format!("{root:.6}"));
        worst_root = worst_root.max((root - closed).abs());
    }
    // 2^{-3/2}/4 computed by hand
    let v = 0.088_388_347_648_318_44;
    let worst_value = (alpha(1.0) - v).abs().max((delta(1.0) + v).abs()).max((eta(1.0) + 0.125).abs());
    verdict(
        4,
        worst_root <= ROOT_TOL && worst_value <= VALUE_TOL,
        format!("roots {roots:?}, max root error {worst_root:.1e}, max value error {worst_value:.1e}"),
    );
}

#[test]
fn criterion_05_curvature_virial_consistency() {
    let cases = [
        (Statistics::Boson, Dimension::D3, VirialKind::DeltaQgbD3, (1.0, 1.6)),
        (Statistics::Boson, Dimension::D2, VirialKind::EtaQgbD2, (1.1, 1.7)),
        (Statistics::Fermion, Dimension::D3, VirialKind::AlphaQgfD3, (1.5, 2.5)),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (stat, dim, kind, (lo, hi)) in cases {
        let spec = GasSpec::new(stat, 1.0, dim).unwrap();
        let threshold = kind.closed_form_threshold().unwrap();
        match curvature_sign_boundary(&spec, 0.01, lo, hi, &cfg()).unwrap() {
            Some(q) => {
                ok &= (q - threshold).abs() <= BOUNDARY_TOL;
                detail.push(format!("{stat:?} {dim:?} q*={q:.4} vs {threshold:.4}"));
            }
            None => {
                ok = false;
                detail.push(format!("{stat:?} {dim:?} no boundary"));
            }
        }
    }
    // fermions in two dimensions: no endpoint change and no interior change
    let spec = GasSpec::fermion(1.0, Dimension::D2).unwrap();
    let none = curvature_sign_boundary(&spec, 0.01, 0.3, 8.0, &cfg()).unwrap().is_none();
    let all_negative = (0..=40)
        .map(|i| 0.3 * (8.0f64 / 0.3).powf(f64::from(i) / 40.0))
        .all(|q| r_default(Statistics::Fermion, q, Dimension::D2, 0.01) < 0.0);
    ok &= none && all_negative;
    detail.push(format!("Fermion D2 none={none}, sampled all negative={all_negative}"));
    verdict(5, ok, detail.join("; "));
}

#[test]
fn criterion_06_anyonic_double_crossing() {
    let n = 60;
    let rs: Vec<f64> = (0..n)
        .map(|i| 0.05 + (0.97 - 0.05) * f64::from(i) / f64::from(n - 1))
        .map(|z| r_default(Statistics::Boson, 1.15, Dimension::D2, z))
        .collect();
    let changes = rs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    let first = rs[0];
    let last = rs[n as usize - 1];
    verdict(
        6,
        changes == 2 && first > 0.0 && last > 0.0,
        format!("{changes} sign changes, R(0.05)={first:.3e}, R(0.97)={last:.3e} (want 2, >0, >0)"),
    );
}

#[test]
fn criterion_07_fermion_q10_plateau() {
    let r = |z| r_default(Statistics::Fermion, 10.0, Dimension::D3, z);
    let (r01, r10, r30, r40) = (r(0.1), r(10.0), r(30.0), r(40.0));
    let spread = (r30 - r40).abs() / r30.abs().max(r40.abs());
    verdict(
        7,
        r01 > 0.0 && r10 < 0.0 && spread <= PLATEAU_TOL,
        format!("R(0.1)={r01:.3e}, R(10)={r10:.3e}, R(30)={r30:.4e}, R(40)={r40:.4e}, spread {spread:.3}"),
    );
}

#[test]
fn criterion_08_metric_validity() {
    let grid = validation_grid();
    let bad: Vec<String> = grid
        .iter()
        .filter_map(|(spec, z)| {
            let g = metric_tensor(spec, 1.0, *z, &cfg()).unwrap();
            (!(g.det() > 0.0 && g.g11 > 0.0 && g.g22 > 0.0)).then(|| format!("{spec:?} z={z}"))
        })
        .collect();
    verdict(8, bad.is_empty(), format!("{} points, failures: {bad:?}", grid.len()));
}

#[test]
fn criterion_09_beta_independence() {
    let points = [
        (Statistics::Boson, 0.5, Dimension::D3, 0.5),
        (Statistics::Boson, 1.15, Dimension::D3, 0.9),
        (Statistics::Boson, 2.0, Dimension::D2, 0.1),
        (Statistics::Fermion, 1.0, Dimension::D3, 1.0),
        (Statistics::Fermion, 10.0, Dimension::D2, 10.0),
        (Statistics::Fermion, 0.5, Dimension::D2, 0.1),
    ];
    let mut worst: f64 = 0.0;
    for (stat, q, dim, z) in points {
        let spec = GasSpec::new(stat, q, dim).unwrap();
        let r1 = determinant_curvature_oracle(&spec, 1.0, z, GammaDerivative::Ladder, &cfg()).unwrap();
        let r2 = determinant_curvature_oracle(&spec, 2.0, z, GammaDerivative::Ladder, &cfg()).unwrap();
        worst = worst.max(relative_difference(r1, r2));
    }
    verdict(9, worst <= BETA_TOL, format!("6 points, max rel. diff {worst:.2e} (tol {BETA_TOL:.0e})"));
}

#[test]
fn criterion_10_selfcheck_command() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_suq-curvature")).arg("selfcheck").output().unwrap();
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let checks = text.lines().filter(|l| l.starts_with("[PASS]")).count();
    verdict(
        10,
        out.status.success() && checks == 5 && elapsed < Duration::from_secs(60),
        format!("exit {:?}, {checks}/5 checks passed, {elapsed:.2?}", out.status.code()),
    );
}
