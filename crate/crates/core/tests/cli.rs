use std::process::{Command, Output};

use suq_curvature::{curvature_closed_form, Dimension, GasSpec, Normalization, QuadratureConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suq-curvature")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["curvature-z", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["curvature-z", "--dim", "4"]).status.code(), Some(1));
    assert_eq!(run(&["curvature-q", "--q", "2:1"]).status.code(), Some(1));
    assert_eq!(run(&["curvature-z", "--rel-tol", "-1"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("curvature-z"));
}

#[test]
fn all_points_failed_exits_2() {
    let out = run(&["curvature-z", "--stat", "boson", "--dim", "3", "--q", "1", "--z", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("domain error"));
}

#[test]
fn partial_failures_are_reported_in_rows() {
    let out = run(&["curvature-z", "--stat", "boson", "--dim", "2", "--q", "1", "--z", "0.5,1.5"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][6].is_empty() && !rows[0][4].is_empty());
    assert!(rows[1][4].is_empty() && !rows[1][6].is_empty());
}

#[test]
fn csv_round_trips_full_precision() {
    let out = run(&[
        "curvature-z",
        "--stat",
        "fermion",
        "--dim",
        "3",
        "--q",
        "2.5",
        "--z",
        "0.3,4",
        "--normalization",
        "raw",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["statistics", "D", "q", "z", "R_reduced", "normalization", "error"]
    );
    let spec = GasSpec::fermion(2.5, Dimension::D3).unwrap();
    for row in reader.records() {
        let row = row.unwrap();
        let z: f64 = row[3].parse().unwrap();
        let r: f64 = row[4].parse().unwrap();
        let direct =
            curvature_closed_form(&spec, z, Normalization::Raw, &QuadratureConfig::default()).unwrap().r_reduced;
        assert_eq!(r.to_bits(), direct.to_bits(), "z={z}");
        assert_eq!(&row[5], "raw");
    }
}

#[test]
fn json_carries_metadata() {
    let out = run(&["virial", "--q", "0.5,1,2", "--format", "json", "--rel-tol", "1e-9"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let meta = &doc["metadata"];
    assert_eq!(meta["rel_tol"], 1e-9);
    assert_eq!(meta["normalization"], "paper");
    assert!(meta["version"].is_string() && meta["units"].is_string());
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[1]["eta"], -0.125);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sign.csv");
    let out = run(&["signtable", "--stat", "boson", "--dim", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("statistics,D,q,z,regime,R_reduced,sign,error"));
    // boson D = 2 defaults: three positive and two negative q values
    assert_eq!(text.matches("R>0").count(), 3);
    assert_eq!(text.matches("R<0").count(), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["curvature-q", "--stat", "boson", "--dim", "3", "--z", "0.2,0.8", "--q", "0.3:3:17"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 1 + 2 * 17);
}

#[test]
fn selfcheck_passes() {
    let out = run(&["selfcheck"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("[PASS]")).count(), 5);
}
