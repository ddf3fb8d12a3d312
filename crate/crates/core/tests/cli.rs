// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end checks of the `qdatabus` binary: exit codes, output layout,
//! determinism and config echo.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const SHORT_TRANSFER: &str = r#"{"squeezing": 1.0, "time": {"t_max": 200}}"#;

fn qdatabus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdatabus"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run_in(experiment: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        experiment,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    qdatabus(&args)
}

fn sorted_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn short_transfer_writes_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.json", SHORT_TRANSFER);
    let out = tmp.path().join("out");
    let o = run_in("transfer", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("transfer_entanglement.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(header["metadata"]["experiment"], "transfer");
    assert_eq!(lines.next().unwrap(), "t,en_sender,en_receiver,efficiency");
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-9, "E_N(TMS(1)) = 1 in natural log");
    let summary: Value = serde_json::from_str(&fs::read_to_string(out.join("transfer_summary.json")).unwrap()).unwrap();
    assert!(summary["summary"]["peak_efficiency"].is_number());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().count(), 2, "paths of written files: {stdout}");
}

#[test]
fn json_format_writes_single_document() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.json", SHORT_TRANSFER);
    let out = tmp.path().join("out");
    let o = run_in("transfer", &cfg, &out, &["--format", "json"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(out.join("transfer.json")).unwrap()).unwrap();
    assert_eq!(doc["tables"][0]["name"], "entanglement");
    let times = doc["tables"][0]["data"][0].as_array().unwrap();
    assert!(times.len() >= 201, "unit grid plus any refined peak times");
    assert_eq!(times.last().unwrap().as_f64(), Some(200.0));
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let unknown = write_config(tmp.path(), "u.json", r#"{"squeezing": 1.0, "sqeezing": 2.0}"#);
    let nested = write_config(
        tmp.path(),
        "n.json",
        r#"{"chain": {"ring_size": 20, "coupling": 1, "colour": 3}}"#,
    );
    let bad_value = write_config(tmp.path(), "b.json", r#"{"squeezing": -1.0}"#);
    let mismatch = write_config(tmp.path(), "m.json", r#"{"experiment": "wstate"}"#);
    let few_sizes = write_config(tmp.path(), "s.json", r#"{"sweep": {"ring_sizes": [8, 12]}}"#);
    let good = write_config(tmp.path(), "g.json", SHORT_TRANSFER);
    let cases: Vec<(&str, PathBuf, Vec<&str>)> = vec![
        ("transfer", unknown, vec![]),
        ("transfer", nested, vec![]),
        ("transfer", bad_value, vec![]),
        ("transfer", mismatch, vec![]),
        ("scaling", few_sizes, vec![]),
        ("teleport", good.clone(), vec![]),
        ("transfer", tmp.path().join("missing.json"), vec![]),
        ("transfer", good, vec!["--format", "xml"]),
    ];
    for (experiment, cfg, extra) in cases {
        let o = run_in(experiment, &cfg, &out, &extra);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{experiment} {}: {}",
            cfg.display(),
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!out.exists(), "nothing is written on config errors");
    }
}

#[test]
fn numerical_failure_exits_with_3() {
    // At r = 40 the covariance entries reach e^80 and the state can no longer
    // be certified physical in double precision.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "r.json", r#"{"squeezing": 40.0, "time": {"t_max": 10}}"#);
    let o = run_in("transfer", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "d.json",
        r#"{"sweep": {"spreads": [0.1], "seed_count": 3}, "time": {"t_max": 300}}"#,
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run_in("disorder", &cfg, &a, &["--seed", "5"]).status.success());
    assert!(run_in("disorder", &cfg, &b, &["--seed", "5"]).status.success());
    assert_eq!(sorted_outputs(&a), sorted_outputs(&b));

    let c = tmp.path().join("c");
    assert!(run_in("disorder", &cfg, &c, &["--seed", "6"]).status.success());
    assert_ne!(
        sorted_outputs(&a),
        sorted_outputs(&c),
        "the seed changes the disorder draws"
    );
}

#[test]
fn echoed_config_reruns_to_identical_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "w.json", r#"{"time": {"t_max": 40.0, "samples": 81}}"#);
    let first = tmp.path().join("first");
    assert!(run_in("wstate", &cfg, &first, &[]).status.success());

    let csv = fs::read_to_string(first.join("wstate_populations.csv")).unwrap();
    let header: Value = serde_json::from_str(csv.lines().next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    let echoed = serde_json::to_string(&header["metadata"]["config"]).unwrap();
    assert!(
        echoed.contains("\"chain\""),
        "resolved config is echoed in full: {echoed}"
    );
    let cfg2 = write_config(tmp.path(), "echo.json", &echoed);
    let second = tmp.path().join("second");
    assert!(run_in("wstate", &cfg2, &second, &[]).status.success());
    assert_eq!(sorted_outputs(&first), sorted_outputs(&second));
}

#[test]
fn floats_carry_17_significant_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.json", SHORT_TRANSFER);
    let out = tmp.path().join("out");
    assert!(run_in("transfer", &cfg, &out, &[]).status.success());
    let csv = fs::read_to_string(out.join("transfer_entanglement.csv")).unwrap();
    for field in csv.lines().skip(2).flat_map(|l| l.split(',')) {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{field}");
    }
}

#[test]
fn source_date_epoch_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.json", r#"{"time": {"t_max": 20}}"#);
    let out = tmp.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_qdatabus"))
        .args([
            "node-parity",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(out.join("node_parity_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["metadata"]["timestamp"], 1_700_000_000);
}
