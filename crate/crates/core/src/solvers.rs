//! Closed-form candidate solutions built from a phase function `g`.
//!
//! Every constructor returns the candidate together with the verdict of the
//! exact residual test; a candidate is never assumed to be a solution.

mod properties;

pub use properties::{
    case3_identity, check_g_properties, check_iff_conditions, Clause, DegreeCondition, IffReport, ImpliedIdentity,
    PropertyReport,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, Tri};
use crate::pdde::{check_k, classify, derive_quantities, verify, CaseLabel, DerivedQuantities, Problem, Verification};
use crate::polyalg::{MultiPoly, RationalFn};
use crate::scalars::{GaussianRational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Case(CaseLabel),
    /// `f = k sin(g(z - c))` for `(L f + p5 f)^2 + f(z+c)^2 = 1`.
    Sine,
    /// `g = A z1 + g*(z2)` with constant coefficients and `L = d/dz1`.
    LinearPhase,
}

/// An auxiliary identity the construction relies on, tested exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SideCondition {
    pub name: String,
    /// Left minus right; the condition holds when this is zero.
    pub expr: ExpPoly,
    pub verdict: Tri,
}

impl SideCondition {
    fn new(name: impl Into<String>, expr: ExpPoly) -> Self {
        let verdict = expr.is_zero_tri();
        SideCondition { name: name.into(), expr, verdict }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCandidate {
    pub family: Family,
    pub k: i32,
    pub g: ExpPoly,
    pub f: ExpPoly,
    pub verification: Verification,
    pub side_conditions: Vec<SideCondition>,
}

impl SolutionCandidate {
    fn new(prob: &Problem, family: Family, k: i32, g: &ExpPoly, f: ExpPoly) -> Result<Self> {
        let verification = verify(prob, &f)?;
        Ok(SolutionCandidate { family, k, g: g.clone(), f, verification, side_conditions: Vec::new() })
    }

    pub fn verdict(&self) -> Tri {
        self.verification.verdict
    }
}

fn rf(p: &MultiPoly) -> RationalFn {
    p.clone().into()
}

fn e(body: &ExpPoly) -> Result<ExpPoly> {
    ExpPoly::exp_i(body)
}

fn two_i(p: &MultiPoly) -> MultiPoly {
    p.scale(&Scalar::gaussian(0, 2))
}

/// `(u e^{ig} + v e^{-ig}) / w`.
fn pair(g: &ExpPoly, u: &RationalFn, v: &RationalFn, w: &RationalFn) -> Result<ExpPoly> {
    let s = &e(g)?.scale(u) + &e(&-g)?.scale(v);
    s.div_rational(w)
}

fn require_case(prob: &Problem, expected: CaseLabel) -> Result<()> {
    let actual = classify(prob).label;
    if actual == expected {
        Ok(())
    } else {
        Err(Error::WrongCase { expected: expected.to_string(), actual: actual.to_string() })
    }
}

fn check_g(prob: &Problem, g: &ExpPoly) -> Result<()> {
    if g.arity() != prob.n {
        return Err(Error::ArityMismatch { left: prob.n, right: g.arity() });
    }
    if !g.has_polynomial_coeffs() {
        return Err(Error::NonPolynomialPhase);
    }
    Ok(())
}

/// `D != 0`, `d2 == 0`:
/// `f = (a1(z-c) e^{i g(z-c)} - (p a2)(z-c) e^{-i g(z-c)}) / (2i D(z-c))`.
pub fn construct_case1(prob: &Problem, g: &ExpPoly, k: i32) -> Result<SolutionCandidate> {
    require_case(prob, CaseLabel::CaseI)?;
    check_g(prob, g)?;
    let q = derive_quantities(prob, k)?;
    let gu = prob.under_e(g)?;
    let u = rf(&prob.under(&q.a1));
    let v = -&rf(&prob.under(&(&prob.p * &q.a2)));
    let f = pair(&gu, &u, &v, &rf(&two_i(&prob.under(&q.det))))?;
    SolutionCandidate::new(prob, Family::Case(CaseLabel::CaseI), k, g, f)
}

/// `D == 0`, `d2 != 0`: `f = (p a2 e^{-ig} - a1 e^{ig}) / (2i d2)`.
pub fn construct_case2(prob: &Problem, g: &ExpPoly, k: i32) -> Result<SolutionCandidate> {
    require_case(prob, CaseLabel::CaseII)?;
    check_g(prob, g)?;
    let q = derive_quantities(prob, k)?;
    let f = pair(g, &-&rf(&q.a1), &rf(&(&prob.p * &q.a2)), &rf(&two_i(&q.d2)))?;
    SolutionCandidate::new(prob, Family::Case(CaseLabel::CaseII), k, g, f)
}

/// `D == 0`, `d2 == 0`, `d1 != 0`: `f = (b1 e^{ig} - p b2 e^{-ig}) / (2i d1)`.
pub fn construct_case3(prob: &Problem, g: &ExpPoly, k: i32) -> Result<SolutionCandidate> {
    require_case(prob, CaseLabel::CaseIII)?;
    check_g(prob, g)?;
    let q = derive_quantities(prob, k)?;
    let f = pair(g, &rf(&q.b1), &-&rf(&(&prob.p * &q.b2)), &rf(&two_i(&q.d1)))?;
    SolutionCandidate::new(prob, Family::Case(CaseLabel::CaseIII), k, g, f)
}

/// The two linear relations that any solution satisfies when `|A| == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitRelations {
    pub k: i32,
    pub g: ExpPoly,
    quantities: DerivedQuantities,
    p: MultiPoly,
}

impl ImplicitRelations {
    /// Left minus right of
    /// `-2i d2 f + 2i D f(z+c) = a1 e^{ig} - p a2 e^{-ig}` and
    /// `2i D L(f) - 2i d1 f = -b1 e^{ig} + p b2 e^{-ig}`.
    pub fn evaluate(&self, prob: &Problem, f: &ExpPoly) -> Result<[ExpPoly; 2]> {
        let q = &self.quantities;
        let eg = e(&self.g)?;
        let emg = e(&-&self.g)?;
        let pa2 = rf(&(&self.p * &q.a2));
        let pb2 = rf(&(&self.p * &q.b2));
        let first = &(&f.scale(&rf(&two_i(&q.d2)).scale(&Scalar::int(-1)))
            + &prob.over_e(f)?.scale(&rf(&two_i(&q.det))))
            - &(&eg.scale(&rf(&q.a1)) - &emg.scale(&pa2));
        let second = &(&prob.l.apply(f)?.scale(&rf(&two_i(&q.det))) - &f.scale(&rf(&two_i(&q.d1))))
            - &(&emg.scale(&pb2) - &eg.scale(&rf(&q.b1)));
        Ok([first, second])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case4Explicit {
    pub a: [[RationalFn; 2]; 2],
    pub det_a: RationalFn,
    pub k_row: [ExpPoly; 2],
    pub f_row: [RationalFn; 2],
    pub candidate: SolutionCandidate,
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Case4Result {
    Explicit(Box<Case4Explicit>),
    Implicit { a: [[RationalFn; 2]; 2], relations: ImplicitRelations },
}

/// `D d2 != 0` with a constant-coefficient operator.
pub fn construct_case4(prob: &Problem, g: &ExpPoly, k: i32) -> Result<Case4Result> {
    require_case(prob, CaseLabel::CaseIV)?;
    if !prob.l.has_constant_coefficients() {
        return Err(Error::NonConstantOperator);
    }
    check_g(prob, g)?;
    let q = derive_quantities(prob, k)?;
    let l = |p: &MultiPoly| -> Result<RationalFn> { prob.l.apply_rational(&rf(p)) };
    let det = rf(&q.det);
    let det_over = rf(&prob.over(&q.det));
    let d1_over = rf(&prob.over(&q.d1));
    let (d1, d2) = (rf(&q.d1), rf(&q.d2));

    let a11 = -&d2;
    let a12 = det.clone();
    let a21 = &(-&l(&q.d2)?) - &(&d1 * &d2).checked_div(&det)?;
    let a22 = &l(&q.det)? + &(&det * &d1_over).checked_div(&det_over)?;
    let det_a = &(&a11 * &a22) - &(&a12 * &a21);
    let a = [[a11, a12], [a21, a22.clone()]];
    if det_a.is_zero() {
        let relations = ImplicitRelations { k, g: g.clone(), quantities: q, p: prob.p.clone() };
        return Ok(Case4Result::Implicit { a, relations });
    }

    let i = Scalar::i();
    let lg = prob.l.apply(g)?;
    let a1 = rf(&q.a1);
    let pa2 = rf(&(&prob.p * &q.a2));
    let k11_rat = &(&(&a1 * &a22) + &(&rf(&q.b1) * &d2)) - &(&det * &l(&q.a1)?);
    let k11 = &ExpPoly::from(k11_rat) - &lg.scale(&(&det * &a1).scale(&i));
    let k12_rat = &(&(&det * &l(&(&prob.p * &q.a2))?) - &(&pa2 * &a22)) - &(&rf(&(&prob.p * &q.b2)) * &d2);
    let k12 = &ExpPoly::from(k12_rat) - &lg.scale(&(&det * &pa2).scale(&i));
    let det_sq_over = (&det * &det).checked_div(&det_over)?;
    let f1 = -&(&rf(&prob.over(&q.b1)) * &det_sq_over);
    let f2 = &rf(&prob.over(&(&prob.p * &q.b2))) * &det_sq_over;

    let g_over = prob.over_e(g)?;
    let numer = &(&(&k11 * &e(g)?) + &(&k12 * &e(&-g)?)) + &(&e(&g_over)?.scale(&f1) + &e(&-&g_over)?.scale(&f2));
    let f = numer.div_rational(&det_a.scale(&Scalar::gaussian(0, 2)))?;
    let candidate = SolutionCandidate::new(prob, Family::Case(CaseLabel::CaseIV), k, g, f)?;
    Ok(Case4Result::Explicit(Box::new(Case4Explicit { a, det_a, k_row: [k11, k12], f_row: [f1, f2], candidate })))
}

/// Dispatches on the classification (or on `forced`) for the four cases.
/// Case IV yields a candidate only in its explicit branch.
pub fn construct(prob: &Problem, g: &ExpPoly, k: i32, forced: Option<CaseLabel>) -> Result<Case4Or<SolutionCandidate>> {
    let label = match forced {
        Some(l) => l,
        None => classify(prob).label,
    };
    Ok(match label {
        CaseLabel::CaseI => Case4Or::Candidate(construct_case1(prob, g, k)?),
        CaseLabel::CaseII => Case4Or::Candidate(construct_case2(prob, g, k)?),
        CaseLabel::CaseIII => Case4Or::Candidate(construct_case3(prob, g, k)?),
        CaseLabel::CaseIV => match construct_case4(prob, g, k)? {
            Case4Result::Explicit(x) => Case4Or::Candidate(x.candidate),
            implicit => Case4Or::Case4(Box::new(implicit)),
        },
        CaseLabel::Degenerate => return Err(Error::WrongShape("degenerate problem has no closed form".into())),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Case4Or<T> {
    Candidate(T),
    Case4(Box<Case4Result>),
}

fn is_const(p: &MultiPoly, value: Option<Scalar>) -> bool {
    match (p.as_constant(), value) {
        (Some(c), Some(v)) => c == v,
        (Some(_), None) => true,
        _ => false,
    }
}

/// `(L f + p5 f)^2 + f(z+c)^2 = 1` with constant `p5`: `f = k sin(g(z - c))`.
/// Side conditions: `L(g(z-c))^2 = 1 - p5^2` and
/// `(e^{i(g +- g(z-c))} - i k p5)^2 = 1 - p5^2` for one sign.
pub fn construct_sine(prob: &Problem, g: &ExpPoly, k: i32) -> Result<SolutionCandidate> {
    check_k(k)?;
    check_g(prob, g)?;
    let one = Some(Scalar::one());
    let shape_ok = prob.p2.is_zero()
        && prob.p3.is_zero()
        && prob.p6.is_zero()
        && is_const(&prob.p1, one.clone())
        && is_const(&prob.p4, one.clone())
        && is_const(&prob.p, one)
        && is_const(&prob.p5, None);
    if !shape_ok {
        return Err(Error::WrongShape("requires p2 = p3 = p6 = 0, p1 = p4 = p = 1 and constant p5".into()));
    }
    let gu = prob.under_e(g)?;
    let half_i = RationalFn::constant(
        prob.n,
        Scalar::from(GaussianRational::new(crate::scalars::rat(0, 1), crate::scalars::rat(-k as i64, 2))),
    );
    let f = (&e(&gu)? - &e(&-&gu)?).scale(&half_i);
    let mut cand = SolutionCandidate::new(prob, Family::Sine, k, g, f)?;

    let p5 = prob.p5.as_constant().unwrap();
    let target = ExpPoly::constant(prob.n, &Scalar::one() - &(&p5 * &p5));
    let lgu = prob.l.apply(&gu)?;
    cand.side_conditions.push(SideCondition::new("L(g(z-c))^2 = 1 - p5^2", &(&lgu * &lgu) - &target));
    let ikp5 = ExpPoly::constant(prob.n, &Scalar::gaussian(0, k as i64) * &p5);
    for (name, body) in [("plus", g + &gu), ("minus", g - &gu)] {
        let w = &e(&body)? - &ikp5;
        cand.side_conditions.push(SideCondition::new(
            format!("(e^(i(g {} g(z-c))) - i k p5)^2 = 1 - p5^2", if name == "plus" { "+" } else { "-" }),
            &(&w * &w) - &target,
        ));
    }
    Ok(cand)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearPhaseResult {
    /// `A^2 = b1 b2 / (a1 a2)`.
    pub root_squared: GaussianRational,
    /// One entry per sign of `A`.
    pub candidates: Vec<(GaussianRational, SolutionCandidate)>,
}

/// Two variables, constant `p1..p4`, `p5 = p6 = 0`, `p = 1`, `L = d/dz1`:
/// `g = A z1 + g*(z2)` with `A^2 = b1 b2 / (a1 a2)` and
/// `f = (a1 e^{i g(z-c)} - a2 e^{-i g(z-c)}) / (2i D)`, subject to
/// `e^{i(g - g(z-c))} = b2 / (i a2 A)`.
pub fn construct_linear_phase(prob: &Problem, g_star: &ExpPoly, k: i32) -> Result<LinearPhaseResult> {
    check_k(k)?;
    check_g(prob, g_star)?;
    let consts: Option<Vec<GaussianRational>> = [&prob.p1, &prob.p2, &prob.p3, &prob.p4]
        .iter()
        .map(|p| p.as_constant().and_then(|s| s.as_gaussian()))
        .collect();
    let shape_ok = prob.n == 2
        && consts.is_some()
        && prob.p5.is_zero()
        && prob.p6.is_zero()
        && prob.p.is_one()
        && prob.l.single_partial() == Some(1);
    if !shape_ok {
        return Err(Error::WrongShape(
            "requires n = 2, constant Gaussian-rational p1..p4, p5 = p6 = 0, p = 1 and L = d/dz1".into(),
        ));
    }
    if !g_star.derive(1)?.is_zero() {
        return Err(Error::WrongShape("g* must not depend on z1".into()));
    }
    let q = derive_quantities(prob, k)?;
    if q.det.is_zero() {
        return Err(Error::WrongCase { expected: "D != 0".into(), actual: classify(prob).label.to_string() });
    }
    let g_of = |p: &MultiPoly| p.as_constant().and_then(|s| s.as_gaussian()).unwrap();
    let (a1, a2, b1, b2) = (g_of(&q.a1), g_of(&q.a2), g_of(&q.b1), g_of(&q.b2));
    let a1a2 = &a1 * &a2;
    let root_squared = &(&b1 * &b2) * &a1a2.inv().map_err(|_| Error::NoExactRoot("a1 a2 = 0".into()))?;
    let root = root_squared.sqrt().ok_or_else(|| Error::NoExactRoot(root_squared.to_string()))?;
    let mut roots = vec![root.clone()];
    if !root.is_zero() {
        roots.push(-&root);
    }
    let z1 = ExpPoly::var(2, 1)?;
    let mut candidates = Vec::new();
    for a in roots {
        let g = &z1.scale_scalar(&a.clone().into()) + g_star;
        let gu = prob.under_e(&g)?;
        let f = pair(&gu, &rf(&q.a1), &-&rf(&q.a2), &rf(&two_i(&q.det)))?;
        let mut cand = SolutionCandidate::new(prob, Family::LinearPhase, k, &g, f)?;
        let i_a2_a = &(&GaussianRational::i() * &a2) * &a;
        if let Ok(inv) = i_a2_a.inv() {
            let rhs = ExpPoly::constant(2, (&b2 * &inv).into());
            cand.side_conditions.push(SideCondition::new("e^(i(g - g(z-c))) = b2/(i a2 A)", &e(&(&g - &gu))? - &rhs));
        }
        candidates.push((a, cand));
    }
    Ok(LinearPhaseResult { root_squared, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprio::{parse_expr, parse_problem};

    fn problem(p: [&str; 6], rhs: &str, c: [&str; 2], l: &str) -> Problem {
        let json = format!(
            r#"{{"n":2,"p1":"{}","p2":"{}","p3":"{}","p4":"{}","p5":"{}","p6":"{}","p":"{rhs}","c":["{}","{}"],"L":{l}}}"#,
            p[0], p[1], p[2], p[3], p[4], p[5], c[0], c[1]
        );
        parse_problem(&json).unwrap()
    }

    const DZ1: &str = r#"[{"var":1,"coeff":"1"}]"#;

    #[test]
    fn case4_constant_coefficients_give_relations() {
        // (f_z1)^2 + (f(z+c) + 2 f)^2 = 1 with c = (pi, 0) is solved by sin(z1 + h(z2)).
        let prob = problem(["1", "0", "0", "1", "0", "2"], "1", ["pi", "0"], DZ1);
        let g = parse_expr("z1 + E(z2)", 2).unwrap();
        let f = parse_expr("sin(z1 + E(z2))", 2).unwrap();
        assert_eq!(verify(&prob, &f).unwrap().verdict, Tri::Zero);
        match construct_case4(&prob, &g, 1).unwrap() {
            Case4Result::Implicit { relations, .. } => {
                let [r1, r2] = relations.evaluate(&prob, &f).unwrap();
                assert!(r1.is_zero() && r2.is_zero());
                let wrong = parse_expr("cos(z1 + E(z2))", 2).unwrap();
                let [w1, _] = relations.evaluate(&prob, &wrong).unwrap();
                assert_eq!(w1.is_zero_tri(), Tri::NonZero);
            }
            other => panic!("expected relations, got {other:?}"),
        }
    }

    #[test]
    fn case4_nonconstant_det_gives_explicit_form() {
        let prob = problem(["1", "0", "0", "1", "z1", "1"], "1", ["1", "0"], DZ1);
        let g = parse_expr("z2", 2).unwrap();
        match construct_case4(&prob, &g, 1).unwrap() {
            Case4Result::Explicit(x) => {
                assert_eq!(x.det_a.as_constant(), Some(Scalar::int(-1)));
                assert!(!x.f_row[0].is_zero() || !x.f_row[1].is_zero());
            }
            other => panic!("expected explicit form, got {other:?}"),
        }
    }

    #[test]
    fn wrong_case_rejected() {
        let prob = problem(["1", "0", "0", "1", "0", "2"], "1", ["pi", "0"], DZ1);
        let g = parse_expr("z1", 2).unwrap();
        assert!(matches!(construct_case1(&prob, &g, 1), Err(Error::WrongCase { .. })));
        let nonconst = problem(["1", "0", "0", "1", "0", "2"], "1", ["pi", "0"], r#"[{"var":1,"coeff":"z2"}]"#);
        assert_eq!(construct_case4(&nonconst, &g, 1).unwrap_err(), Error::NonConstantOperator);
    }

    #[test]
    fn linear_phase_rejects_irrational_root() {
        // a1 a2 = 1, b1 b2 = 2: A = sqrt(2) is not in Q(i).
        let prob = problem(["1", "1", "0", "1", "0", "0"], "1", ["2*pi", "0"], DZ1);
        let g = parse_expr("z2", 2).unwrap();
        assert!(matches!(construct_linear_phase(&prob, &g, 1), Err(Error::NoExactRoot(_))));
    }
}
