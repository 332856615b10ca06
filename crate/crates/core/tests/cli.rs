use std::process::Command;

use hpw::cli::run;
use serde_json::Value;

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["hpw"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let report = out.report.unwrap_or_else(|| panic!("{:?}: {:?}", args, out.message));
    let errors: Vec<String> = schema().iter_errors(&report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{:?} violates the schema: {:?}", args, errors);
    (out.code, report)
}

fn without_timing(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string(&v).unwrap()
}

#[test]
fn classify_weight_reports_trivial_gaussian_weight() {
    let (code, r) = report(&["classify-weight", "--p", "exp(t^2)"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["big_space"]["verdict"], "trivial");
    assert_eq!(r["result"]["small_space"]["verdict"], "trivial");
    assert_eq!(r["schema_version"], "1.0");
}

#[test]
fn norm_of_zero() {
    let (code, r) = report(&["norm", "--f", "0", "--p", "t"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["value"], 0.0);
    assert_eq!(r["result"]["log_value"], "-inf");
}

#[test]
fn theorem3_report() {
    let (code, r) = report(&["theorem3", "--f", "exp(2*i*z)/(z+i)", "--p", "t"]);
    assert_eq!(code, 0);
    let a = r["result"]["a_hat"].as_f64().unwrap();
    assert!((a + 2.0).abs() < 1e-2);
    assert_eq!(r["result"]["diverges_to_minus_inf"], true);

    let (code, r) = report(&["theorem3", "--f", "1/(z+i)", "--p", "t"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["status"], "hypothesis-not-met");

    assert_eq!(run(["hpw", "theorem3", "--f", "0", "--p", "t"]).code, 2);
}

#[test]
fn every_subcommand_validates() {
    let cases: &[&[&str]] = &[
        &["classify-weight", "--p", "t"],
        &["norm", "--f", "4/(1-i*z)^2", "--p", "t"],
        &["mline", "--f", "1/(z+i)", "--points", "16"],
        &["membership", "--f", "exp(2*i*z)/(z+i)", "--p", "t", "--c-max-exp", "6"],
        &["f-properties", "--f", "exp(2*i*z)/(z+i)", "--p", "t"],
        &["f-properties", "--f", "exp(2*i*z)", "--p", "1"],
        &["bloch-compare", "--f", "w^2", "--no-little"],
        &["bloch-compare", "--f-prime", "1/(1-w)", "--no-little"],
        &["witness", "--p", "t"],
        &["witness", "--p", "t", "--literal-witness"],
    ];
    for args in cases {
        let (code, _) = report(args);
        assert!(code == 0 || code == 1, "{:?} exit {}", args, code);
    }
    let (_, r) = report(&["witness", "--p", "t", "--literal-witness"]);
    assert_eq!(r["result"]["small_space"]["form"], "literal");
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn membership_with_a_short_schedule_is_inconclusive() {
    let (code, r) = report(&["membership", "--f", "exp(2*i*z)/(z+i)", "--p", "t", "--c-max-exp", "6"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["in_small_space"], "inconclusive");
}

#[test]
fn reports_are_deterministic() {
    let args = ["mline", "--f", "exp(2*i*z)/(z+i)", "--points", "12"];
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn usage_errors() {
    for args in [
        vec!["hpw"],
        vec!["hpw", "norm", "--p", "t"],
        vec!["hpw", "norm", "--f", "z*", "--p", "t"],
        vec!["hpw", "norm", "--f", "z", "--p", "t", "--x-cap", "-1"],
        vec!["hpw", "classify-weight", "--p", "t - 1"],
        vec!["hpw", "bloch-compare", "--f", "1/(w-0.5)"],
        vec!["hpw", "bloch-compare", "--f", "w", "--f-prime", "1"],
    ] {
        let out = run(args.clone());
        assert_eq!(out.code, 2, "{:?}", args);
        assert!(out.report.is_none() && out.message.is_some());
    }
}

#[test]
fn curves_are_written_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let curves = dir.path().join("curves");
    let o = run([
        "hpw",
        "mline",
        "--f",
        "1/(z+i)",
        "--points",
        "8",
        "--out",
        out.to_str().unwrap(),
        "--curves",
        curves.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved, o.report.unwrap());
    let path = saved["curves"][0]["path"].as_str().unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    assert!(!text.contains('\r'));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 8);
    let inline = &saved["result"]["lines"];
    for (i, (t, v)) in rows.iter().enumerate() {
        assert_eq!(*t, inline[i]["y"].as_f64().unwrap());
        assert_eq!(*v, inline[i]["log_value"].as_f64().unwrap());
    }
}

#[test]
fn binary_honours_thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_hpw"))
        .args(["norm", "--f", "4/(1-i*z)^2", "--p", "t"])
        .env("HPW_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = Command::new(env!("CARGO_BIN_EXE_hpw")).args(["norm"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
}
