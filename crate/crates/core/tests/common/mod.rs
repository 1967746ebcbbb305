#![allow(dead_code)]

use std::path::PathBuf;

use fermat_core::exprio::{load_problem, parse_expr};
use fermat_core::pdde::Problem;
use fermat_core::ExpPoly;

pub fn problem(name: &str) -> Problem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(format!("{name}.json"));
    load_problem(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn ex(text: &str) -> ExpPoly {
    parse_expr(text, 2).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn ks(k: i32) -> &'static str {
    if k == 1 {
        "k1"
    } else {
        "km1"
    }
}

/// A known solution: problem file, k, phase g and solution f as text.
pub struct Known {
    pub label: String,
    pub problem: String,
    pub k: i32,
    pub g: String,
    pub f: String,
}

fn known(
    label: impl Into<String>,
    problem: impl Into<String>,
    k: i32,
    g: impl Into<String>,
    f: impl Into<String>,
) -> Known {
    Known { label: label.into(), problem: problem.into(), k, g: g.into(), f: f.into() }
}

/// Hand-derived solutions of the example problems. Each `f` is written out
/// from its closed form, independently of the constructors.
pub fn known_solutions() -> Vec<Known> {
    let mut v = vec![
        known("poly_case1 f", "poly_case1", 1, "z2^2", "1/(2*i)*E(z2^2) + (z1 - 1)*E(-z2^2)"),
        known("poly_case1 f*", "poly_case1", 1, "z2^2 + pi/2", "1/2*E(z2^2) - i*(z1 - 1)*E(-z2^2)"),
    ];
    for m in 1..=3 {
        let gu = format!("z1 - 2*pi + z2^{m} + 1");
        v.push(known(
            format!("const_case1 m={m}"),
            "const_case1",
            1,
            format!("z1 + z2^{m} + 1"),
            format!("1/(4*i)*((1 - i)*E({gu}) - 3*(1 + i)*E(-({gu})))"),
        ));
    }
    for k in [1, -1] {
        v.push(known(
            format!("nested_a2b1 k={k}"),
            format!("nested_a2b1_{}", ks(k)),
            k,
            "z2 + z1*E(-2*z2)",
            format!("{k}*E(z2 - pi/2 - z1*E(-2*z2))"),
        ));
        v.push(known(
            format!("nested_a1b2 k={k}"),
            format!("nested_a1b2_{}", ks(k)),
            k,
            "z2 + z1*E(2*z2)",
            "E(-(z2 + pi/2 - z1*E(2*z2)))",
        ));
    }
    v.push(known("case3_nested", "case3_nested", 1, "E(z2) + pi/4", "1/2*E(-(E(z2) + pi/4))"));
    v.push(known(
        "case3_constant",
        "case3_constant",
        1,
        "z1 + E(z2)",
        "1/4*((1 + i)*E(z1 + E(z2)) + 2*(1 - i)*E(-(z1 + E(z2))))",
    ));
    for k in [1, -1] {
        v.push(known(
            format!("case2_polynomial_rhs k={k}"),
            "case2_polynomial_rhs",
            k,
            format!("{}*z1 + z2^2", 2 * k),
            format!("{k}/(4*i)*(E({g}) - (z2 + 1)*E(-({g})))", g = format!("{}*z1 + z2^2", 2 * k)),
        ));
        v.push(known(format!("sine k={k}"), "sine", k, format!("{k}*z1 + z2"), format!("{k}*sin({k}*(z1 - pi) + z2)")));
    }
    v
}
