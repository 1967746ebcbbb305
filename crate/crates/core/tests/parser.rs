mod common;

use common::*;
use fermat_core::exprio::{load_problem, parse_expr, parse_source, print_expr, MAX_DEPTH};
use fermat_core::Error;

#[test]
fn every_problem_file_loads() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        load_problem(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 10);
}

#[test]
fn known_expressions_round_trip() {
    for s in known_solutions() {
        for text in [&s.f, &s.g] {
            let a = ex(text);
            assert_eq!(ex(&print_expr(&a)), a, "{text}");
        }
    }
}

#[test]
fn nesting_and_exponent_limits() {
    let deep = format!("{}z1{}", "(".repeat(10_000), ")".repeat(10_000));
    assert!(matches!(parse_expr(&deep, 1), Err(Error::Syntax { .. })));
    let ok = format!("{}z1{}", "(".repeat(MAX_DEPTH - 1), ")".repeat(MAX_DEPTH - 1));
    assert!(parse_expr(&ok, 1).is_ok());
    let nested = format!("{}z1{}", "E(".repeat(5_000), ")".repeat(5_000));
    assert!(matches!(parse_source(&nested), Err(Error::Syntax { .. })));
    let negs = format!("{}z1", "-".repeat(10_000));
    assert!(matches!(parse_expr(&negs, 1), Err(Error::Syntax { .. })));
    assert!(matches!(parse_expr("z1^65", 1), Err(Error::Syntax { pos: 3, .. })));
    assert!(matches!(parse_expr("z1^123456789012345678901234567890", 1), Err(Error::Syntax { pos: 3, .. })));
    assert!(parse_expr("(z1 + 1)^64", 1).is_ok());
}

#[test]
fn malformed_inputs_carry_positions() {
    let cases: [(&str, usize); 8] =
        [("", 0), ("z1 +", 4), ("2 ** z1", 3), ("E z1", 2), ("sin(z1))", 7), ("z1 $ z2", 3), ("foo(z1)", 0), ("z", 0)];
    for (text, pos) in cases {
        match parse_expr(text, 2) {
            Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(matches!(parse_expr("z0", 2), Err(Error::Arity { index: 0, pos: 0, .. })));
    assert!(matches!(parse_expr("z1 + z7", 2), Err(Error::Arity { index: 7, pos: 5, .. })));
}
