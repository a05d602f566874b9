use std::process::Command;

use clap::Parser;
use polydiam::harness::{dispatch, RunConfig};
use polydiam::{MonomialOperator, Polynomial};
use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32) {
    let cfg = RunConfig::try_parse_from(std::iter::once("polydiam").chain(args.iter().copied())).unwrap();
    let out = dispatch(&cfg);
    (serde_json::from_str(&out.json).unwrap(), out.exit_code)
}

#[test]
fn gauss_lucas_on_z5() {
    let (v, code) = run(&["gauss-lucas", "--poly", r#"{"coeffs":[0,0,0,0,0,1]}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["margins"], serde_json::json!([0.0]));
}

#[test]
fn dnk_31_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("d.csv");
    let (v, code) = run(&[
        "dnk", "--n", "3", "--k", "1", "--starts", "200", "--seed", "7", "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let best = v["best_ratio"].as_f64().unwrap();
    assert!((best - 2.0 / 3.0).abs() < 1e-3, "{best}");
    assert_eq!(v["exactness"], "EXACT");

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["n", "k", "best_ratio", "exactness_flag", "degree_used", "witness_roots", "starts", "seed"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "3");
    assert_eq!(&rows[0][3], "EXACT");
    assert_eq!(rows[0][5].split(';').count(), 3);
    assert_eq!(&rows[0][7], "7");
}

#[test]
fn classify_derivative_operator_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deriv5.json");
    let op = MonomialOperator::derivative(5, 1);
    std::fs::write(&path, serde_json::to_string(&op).unwrap()).unwrap();
    let (v, code) = run(&["classify", "--op", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let m = &v["matches"][0];
    assert_eq!(m["form"], "Form3");
    assert_eq!(m["k"], 1);
    assert_eq!(m["map"]["a"], serde_json::json!([1.0, 0.0]));
    assert_eq!(v["dnk_used"]["provenance"], "Exact");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["roots", "--poly", r#"{"coeffs":[3]}"#]).1, 1);
    assert_eq!(run(&["roots", "--poly", r#"{"coeffs":[1,"#]).1, 2);
    assert_eq!(run(&["roots", "--poly", "/nonexistent/p.json"]).1, 2);
    // wrong image arity
    let (v, code) = run(&["classify", "--op", r#"{"n":2,"images":[{"coeffs":[1]}]}"#]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "parse");
    assert_eq!(run(&["claim", "--l", "2", "--beta", "1,0"]).1, 1);
}

#[test]
fn out_and_svg_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let (out, svg) = (dir.path().join("o.json"), dir.path().join("p.svg"));
    let (v, _) = run(&[
        "hull", "--poly", r#"{"coeffs":[-1,0,0,1]}"#, "--out", out.to_str().unwrap(), "--svg",
        svg.to_str().unwrap(),
    ]);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved, v);
    assert_eq!(v["hull"]["vertices"].as_array().unwrap().len(), 3);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    // z^3 - 1 has a double critical point at 0
    assert_eq!(svg.matches("<path").count(), 1);
}

#[test]
fn emitted_polynomials_and_operators_reparse() {
    // P(z/2) on P_4
    let op_json = r#"{"n":4,"images":[{"coeffs":[1]},{"coeffs":[0,0.5]},{"coeffs":[0,0,0.25]},{"coeffs":[0,0,0,0.125]},{"coeffs":[0,0,0,0,0.0625]}]}"#;
    let (v, code) = run(&["refute", "--op", op_json, "--trials", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "Counterexample");
    let p: Polynomial = serde_json::from_value(v["p"].clone()).unwrap();
    let again: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(p, again);

    let parsed: MonomialOperator = serde_json::from_str(op_json).unwrap();
    let back: MonomialOperator = serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(parsed, back);
}

#[test]
fn suite_emits_summary() {
    // every failure carries a command; with none expected, check the shape
    let (v, code) = run(&["suite", "claim", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["suite"], "claim");
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn binary_prints_one_document() {
    let exe = env!("CARGO_BIN_EXE_polydiam");
    let out = Command::new(exe)
        .args(["diam", "--poly", r#"{"coeffs":[-4,0,1]}"#])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["diameter"].as_f64().unwrap() - 4.0).abs() < 1e-12);

    let bad = Command::new(exe).args(["roots", "--poly", "{"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let again = Command::new(exe).args(["diam", "--poly", r#"{"coeffs":[-4,0,1]}"#]).output().unwrap();
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn basis_command() {
    let (v, code) = run(&["basis", "--l", "2", "--lambdas", "[[0,0],[1,0],[2,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["nonsingular"], Value::Bool(true));
    let (v, _) = run(&["basis", "--l", "2", "--lambdas", "[[0,0],[0,0],[1,0]]"]);
    assert_eq!(v["nonsingular"], Value::Bool(false));
}
