use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat-pdde")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const POLY_CASE1_F: &str = "1/(2*i)*E(z2^2) + (z1 - 1)*E(-z2^2)";

#[test]
fn verify_exit_codes() {
    let p = problem("poly_case1");
    let ok = run(&["verify", "--problem", &p, "--f", POLY_CASE1_F]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("verdict: Zero"));
    let zero = run(&["verify", "--problem", &p, "--f", "0"]);
    assert_eq!(code(&zero), 1);
}

#[test]
fn classify_reports_case() {
    let o = run(&["classify", "--problem", &problem("case3_nested")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("case: CaseIII"));
    let o = run(&["--format", "records", "classify", "--problem", &problem("degenerate")]);
    assert_eq!(records(&o)[0]["case"], "Degenerate");
}

#[test]
fn usage_errors_exit_three() {
    let p = problem("poly_case1");
    for args in [
        vec!["verify", "--problem", p.as_str(), "--f", "E(z1"],
        vec!["verify", "--problem", "/nonexistent.json", "--f", "1"],
        vec!["derive", "--problem", p.as_str(), "--k", "2"],
        vec!["no-such-command"],
        vec!["verify", "--problem", p.as_str()],
        vec!["spot-check", "--problem", p.as_str(), "--f", "1", "--radius", "-1"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn construct_then_verify_agrees() {
    for (name, g) in [
        ("const_case1", "z1 + z2^3 + 1"),
        ("nested_a2b1_k1", "z2 + z1*E(-2*z2)"),
        ("case2_operator_sum", "2*z1 + (z2 - z1)^2"),
    ] {
        let p = problem(name);
        let o = run(&["--format", "records", "construct", "--problem", &p, "--g", g]);
        for rec in records(&o) {
            let f = rec["f"].as_str().unwrap();
            let v = run(&["--format", "records", "verify", "--problem", &p, "--f", f]);
            assert_eq!(records(&v)[0]["verdict"], rec["verdict"], "{name} {f}");
        }
    }
    // nested_a2b1 solves the equation only for its own k.
    let o = run(&["construct", "--problem", &problem("nested_a2b1_k1"), "--g", "z2 + z1*E(-2*z2)", "--k", "1"]);
    assert_eq!(code(&o), 0);
    let o = run(&["construct", "--problem", &problem("case2_operator_sum"), "--g", "2*z1 + (z2 - z1)^2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn construct_families() {
    let o = run(&["construct", "--problem", &problem("sine"), "--g", "z1 + z2", "--family", "sine", "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&[
        "--format",
        "records",
        "construct",
        "--problem",
        &problem("linear_phase"),
        "--g",
        "z2^2",
        "--family",
        "linear-phase",
        "--k",
        "1",
    ]);
    let recs = records(&o);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["verdict"] == "Zero"));
    let o = run(&["construct", "--problem", &problem("case4_sine"), "--g", "z1", "--k", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("relations"));
}

#[test]
fn property_and_pair_checks() {
    let o = run(&[
        "--format",
        "records",
        "check-properties",
        "--problem",
        &problem("const_case1"),
        "--g",
        "z1 + z2^2 + 1",
        "--k",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let rec = &records(&o)[0];
    assert!(rec["holding"].as_array().unwrap().contains(&Value::from("c")));
    let o = run(&["--format", "records", "check-iff", "--problem", &problem("nested_a1b2_k1"), "--k", "1"]);
    assert_eq!(records(&o)[0]["a1 = b2 = 0"], true);
    let o = run(&["check-iff", "--problem", &problem("case3_nested"), "--g", "E(z2)", "--k", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn numeric_commands_are_deterministic() {
    let p = problem("poly_case1");
    let args =
        ["--format", "records", "spot-check", "--problem", &p, "--f", POLY_CASE1_F, "--points", "30", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let o =
        run(&["--format", "records", "estimate-order", "--f", "E(-z1)", "--radii", "4,8,16,32", "--samples", "1024"]);
    assert_eq!(code(&o), 0);
    let slope = records(&o)[0]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.2);
    let o = run(&["estimate-order", "--f", "1/z1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn transform_and_derive() {
    let o = run(&["--format", "records", "derive", "--problem", &problem("poly_case1"), "--k", "1"]);
    let rec = &records(&o)[0];
    assert_eq!(rec["a1"], "4*i*z1");
    assert_eq!(rec["D"], "4*i*z1");
    let o = run(&["transform", "--problem", &problem("poly_case1"), "--g", "z2^2", "--k", "-1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("xi0: 4*i*z1"));
}
