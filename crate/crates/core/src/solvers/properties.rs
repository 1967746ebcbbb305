//! Structural properties a phase function must have, and the coefficient
//! conditions that force a transcendental phase.

use serde::Serialize;

use crate::error::Result;
use crate::exppoly::{ExpPoly, Shape, Tri};
use crate::pdde::{classify, derive_quantities, CaseLabel, DerivedQuantities, Problem};
use crate::polyalg::{Degree, MultiPoly, RationalFn};
use crate::scalars::Scalar;

/// One clause of a case's property list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub label: &'static str,
    pub description: &'static str,
    pub holds: bool,
}

/// Degree comparison for a single-partial operator `d/dz_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCondition {
    pub var: usize,
    /// Degree in `z_j` of the relevant partial derivative of the phase.
    pub phase_degree: Option<u32>,
    /// Admissible differences of coefficient degrees; `None` entries involve
    /// a vanishing coefficient and do not apply.
    pub candidates: Vec<Option<i64>>,
    /// The candidate that matched, if any.
    pub matched: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub case: CaseLabel,
    pub k: i32,
    /// `true` when the shifted phase is `g(z - c)`, `false` for `g(z + c)`.
    pub backward_shift: bool,
    pub g_shape: Shape,
    /// Shape of `L` applied to the shifted phase (Cases I and IV) or to `g`
    /// (Case II).
    pub l_g_shape: Shape,
    pub l_g_zero: bool,
    pub g_plus_shift: Shape,
    pub g_minus_shift: Shape,
    pub a1_b2_zero: bool,
    pub a2_b1_zero: bool,
    pub degree_condition: Option<DegreeCondition>,
    pub clauses: Vec<Clause>,
}

impl PropertyReport {
    pub fn holding(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| c.holds).map(|c| c.label).collect()
    }

    pub fn holds(&self, label: &str) -> bool {
        self.clauses.iter().any(|c| c.holds && c.label == label)
    }
}

fn is_poly_shape(s: Shape) -> bool {
    matches!(s, Shape::Constant | Shape::PolynomialNonConstant)
}

fn deg(p: &MultiPoly, j: usize) -> Degree {
    p.degree_in(j).unwrap_or(Degree::NegInf)
}

fn clause(label: &'static str, description: &'static str, holds: bool) -> Clause {
    Clause { label, description, holds }
}

/// Evaluates the property list of `case` on a concrete phase `g`.
pub fn check_g_properties(prob: &Problem, g: &ExpPoly, k: i32, case: CaseLabel) -> Result<PropertyReport> {
    let q = derive_quantities(prob, k)?;
    let cls = classify(prob);
    let backward = case == CaseLabel::CaseI;
    let gs = if backward { prob.under_e(g)? } else { prob.over_e(g)? };
    let g_shape = g.classify_shape();
    let g_plus_shift = (g + &gs).classify_shape();
    let g_minus_shift = (g - &gs).classify_shape();
    let g_const = g_shape == Shape::Constant;
    let plus_const = g_plus_shift == Shape::Constant;
    let minus_const = g_minus_shift == Shape::Constant;
    let either_const = plus_const || minus_const;
    let lg_target = if case == CaseLabel::CaseII { g.clone() } else { gs.clone() };
    let lg = prob.l.apply(&lg_target)?;
    let l_g_shape = lg.classify_shape();
    let l_g_zero = lg.is_zero();
    let a1_b2_zero = q.a1.is_zero() && q.b2.is_zero();
    let a2_b1_zero = q.a2.is_zero() && q.b1.is_zero();
    let pair_zero = a1_b2_zero || a2_b1_zero;
    let single = prob.l.single_partial();

    let mut clauses = Vec::new();
    let mut degree_condition = None;
    match case {
        CaseLabel::CaseI => {
            clauses.push(clause("i", "g is constant", g_const));
            clauses.push(clause(
                "ii",
                "L(g(z-c)) is a polynomial and g + g(z-c) or g - g(z-c) is constant",
                is_poly_shape(l_g_shape) && either_const,
            ));
            clauses.push(clause(
                "iii",
                "L(g(z-c)) is transcendental, g + g(z-c) is non-constant, and a1 = b2 = 0 or a2 = b1 = 0",
                l_g_shape == Shape::Transcendental && !plus_const && pair_zero,
            ));
            if let (Some(j), true) = (single, cls.d1_zero && cls.d2_zero) {
                let gj = g.derive(j)?;
                let gj_shape = gj.classify_shape();
                let gsj = gs.derive(j)?;
                let phase_degree = gsj.as_poly().and_then(|p| match deg(&p, j) {
                    Degree::Finite(d) if !p.is_zero() => Some(d),
                    _ => None,
                });
                let candidates = vec![deg(&q.b1, j).minus(deg(&q.a1, j)), deg(&q.b2, j).minus(deg(&q.a2, j))];
                let matched = phase_degree.and_then(|d| candidates.iter().flatten().copied().find(|c| *c == d as i64));
                clauses.push(clause("a", "g is constant", g_const));
                clauses.push(clause(
                    "b",
                    "g_zj = 0 and g + g(z-c) or g - g(z-c) is constant",
                    gj.is_zero() && either_const,
                ));
                clauses.push(clause(
                    "c",
                    "g_zj is a non-zero polynomial, g - g(z-c) is constant, and a degree condition holds",
                    !gj.is_zero() && is_poly_shape(gj_shape) && minus_const && matched.is_some(),
                ));
                clauses.push(clause(
                    "d",
                    "g_zj is transcendental, g + g(z-c) is non-constant, and a1 = b2 = 0 or a2 = b1 = 0",
                    gj_shape == Shape::Transcendental && !plus_const && pair_zero,
                ));
                degree_condition = Some(DegreeCondition { var: j, phase_degree, candidates, matched });
            }
        }
        CaseLabel::CaseII => {
            clauses.push(clause("i", "g is constant", g_const));
            let side = if cls.d1_zero { !(&q.a1 * &q.a2).is_zero() } else { either_const };
            clauses.push(clause(
                "ii",
                "L(g) is a polynomial, and g(z+c) +- g is constant when d1 != 0, a1 a2 != 0 when d1 = 0",
                is_poly_shape(l_g_shape) && side,
            ));
            if let (Some(j), true) = (single, cls.d1_zero) {
                let gj = g.derive(j)?;
                let b1 = deg(&q.bt1, j).minus(deg(&q.a1, j));
                let b2 = deg(&q.bt2, j).minus(deg(&q.a2, j));
                let phase_degree = gj.as_poly().filter(|p| !p.is_zero()).and_then(|p| match deg(&p, j) {
                    Degree::Finite(d) => Some(d),
                    Degree::NegInf => None,
                });
                let lower = b1.is_some_and(|d| d < 0) || b2.is_some_and(|d| d < 0);
                let matched = match (phase_degree, b1, b2) {
                    (Some(d), Some(x), Some(y)) if x == y && x >= 0 && d as i64 == x => Some(x),
                    _ => None,
                };
                clauses.push(clause("a", "g is constant", g_const));
                clauses.push(clause("b", "g_zj = 0 with a degree deficit in bt1/a1 or bt2/a2", gj.is_zero() && lower));
                clauses.push(clause(
                    "c",
                    "g_zj is a non-zero polynomial of degree deg bt1 - deg a1 = deg bt2 - deg a2",
                    matched.is_some(),
                ));
                degree_condition = Some(DegreeCondition { var: j, phase_degree, candidates: vec![b1, b2], matched });
            }
        }
        CaseLabel::CaseIII => {
            clauses.push(clause("i", "g is constant", g_const));
            let p_over = |num: &MultiPoly, den: &MultiPoly| -> Option<Scalar> {
                RationalFn::new(num.clone(), den.clone()).ok().and_then(|r| r.as_constant()).filter(|c| !c.is_zero())
            };
            let nz_const = |p: &MultiPoly| p.as_constant().is_some_and(|c| !c.is_zero());
            let first = q.bt1.is_zero() && q.b2.is_zero() && nz_const(&prob.p5) && p_over(&prob.p, &prob.p2).is_some();
            let second = q.bt2.is_zero() && q.b1.is_zero() && nz_const(&prob.p2) && p_over(&prob.p, &prob.p5).is_some();
            clauses.push(clause(
                "ii",
                "g is transcendental and g(z+c) + g is constant under bt1 = b2 = 0 or bt2 = b1 = 0",
                g_shape == Shape::Transcendental && plus_const && (first || second),
            ));
            let (lhs, rhs) = case3_identity(prob, &q);
            let identity = lhs == rhs && !lhs.is_zero();
            clauses.push(clause(
                "iii",
                "d1^2 (p b1 b2)(z+c) = d1(z+c)^2 p bt1 bt2 != 0 and g(z+c) + g or g(z+c) - g is constant",
                identity && either_const,
            ));
        }
        CaseLabel::CaseIV => {
            let lgo_poly = is_poly_shape(l_g_shape);
            let lg_plain = prob.l.apply(g)?;
            let det_a_zero = case4_det_zero(prob)?;
            if !det_a_zero {
                let b1b2 = !(&q.b1 * &q.b2).is_zero();
                let sum = (&lg_plain + &lg).classify_shape() == Shape::Transcendental;
                let diff = (&lg_plain - &lg).classify_shape() == Shape::Transcendental;
                clauses.push(clause("i", "g is constant", b1b2 && g_const));
                clauses.push(clause("ii", "L(g(z+c)) = 0", b1b2 && l_g_zero));
                clauses.push(clause(
                    "iii",
                    "L(g(z+c)) is a polynomial and g +- g(z+c) is constant",
                    b1b2 && lgo_poly && either_const,
                ));
                clauses.push(clause(
                    "iv",
                    "L(g) + L(g(z+c)) and L(g) - L(g(z+c)) are transcendental",
                    b1b2 && sum && diff,
                ));
            } else {
                let lgp_shape = lg_plain.classify_shape();
                clauses.push(clause("a", "g is constant", g_const));
                clauses.push(clause("b", "L(g) = 0 and g +- g(z+c) is constant", lg_plain.is_zero() && either_const));
                clauses.push(clause(
                    "c",
                    "L(g) is a polynomial and g - g(z+c) is constant",
                    is_poly_shape(lgp_shape) && minus_const,
                ));
            }
        }
        CaseLabel::Degenerate => {}
    }

    Ok(PropertyReport {
        case,
        k,
        backward_shift: backward,
        g_shape,
        l_g_shape,
        l_g_zero,
        g_plus_shift,
        g_minus_shift,
        a1_b2_zero,
        a2_b1_zero,
        degree_condition,
        clauses,
    })
}

/// Both sides of `d1^2 (p b1 b2)(z+c) = d1(z+c)^2 p bt1 bt2`.
pub fn case3_identity(prob: &Problem, q: &DerivedQuantities) -> (MultiPoly, MultiPoly) {
    let lhs = &(&q.d1 * &q.d1) * &prob.over(&(&(&prob.p * &q.b1) * &q.b2));
    let d1o = prob.over(&q.d1);
    let rhs = &(&(&d1o * &d1o) * &prob.p) * &(&q.bt1 * &q.bt2);
    (lhs, rhs)
}

fn case4_det_zero(prob: &Problem) -> Result<bool> {
    let q = derive_quantities(prob, 1)?;
    if q.det.is_zero() {
        return Ok(true);
    }
    let rf = |p: &MultiPoly| -> RationalFn { p.clone().into() };
    let l = |p: &MultiPoly| prob.l.apply_rational(&rf(p));
    let det = rf(&q.det);
    let (d1, d2) = (rf(&q.d1), rf(&q.d2));
    let a21 = &(-&l(&q.d2)?) - &(&d1 * &d2).checked_div(&det)?;
    let a22 = &l(&q.det)? + &(&det * &rf(&prob.over(&q.d1))).checked_div(&rf(&prob.over(&q.det)))?;
    Ok((&(&(-&d2) * &a22) - &(&det * &a21)).is_zero())
}

// ---------------------------------------------------------------------------
// Coefficient conditions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct ImpliedIdentity {
    pub condition: &'static str,
    pub statement: &'static str,
    /// Left minus right at the supplied phase.
    pub expr: ExpPoly,
    pub verdict: Tri,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IffReport {
    pub k: i32,
    pub a2_b1_zero: bool,
    pub a1_b2_zero: bool,
    pub bt1_b2_zero: bool,
    pub bt2_b1_zero: bool,
    /// Whether `L` has constant coefficients, as the transcendence criteria
    /// for `L(g(z-c))` require.
    pub constant_operator: bool,
    pub identities: Vec<ImpliedIdentity>,
}

fn identity(condition: &'static str, statement: &'static str, expr: ExpPoly) -> ImpliedIdentity {
    let verdict = expr.is_zero_tri();
    ImpliedIdentity { condition, statement, expr, verdict }
}

/// Zero tests of the four coefficient pairs. With a phase `g`, each
/// vanishing pair also yields its implied identity evaluated at `g`.
pub fn check_iff_conditions(prob: &Problem, k: i32, g: Option<&ExpPoly>) -> Result<IffReport> {
    let q = derive_quantities(prob, k)?;
    let mut report = IffReport {
        k,
        a2_b1_zero: q.a2.is_zero() && q.b1.is_zero(),
        a1_b2_zero: q.a1.is_zero() && q.b2.is_zero(),
        bt1_b2_zero: q.bt1.is_zero() && q.b2.is_zero(),
        bt2_b1_zero: q.bt2.is_zero() && q.b1.is_zero(),
        constant_operator: prob.l.has_constant_coefficients(),
        identities: Vec::new(),
    };
    let Some(g) = g else { return Ok(report) };
    let rf = |p: &MultiPoly| -> RationalFn { p.clone().into() };
    let e = ExpPoly::exp_i;
    let gu = prob.under_e(g)?;
    let gs_sum = g + &gu;
    let go = prob.over_e(g)?;
    let i = Scalar::i();

    if report.a2_b1_zero && !prob.p1.is_zero() {
        let coef = rf(&(&prob.p * &prob.p2)).checked_div(&rf(&prob.p1))?.scale(&i);
        let expr = &prob.l.apply(&gu)? + &e(&-&gs_sum)?.scale(&coef);
        report.identities.push(identity("a2 = b1 = 0", "L(g(z-c)) = -(p p2 i / p1) e^{-i(g + g(z-c))}", expr));
    }
    let pu = prob.under(&prob.p);
    let p2u = prob.under(&prob.p2);
    if report.a1_b2_zero && !prob.p2.is_zero() && !prob.p1.is_zero() {
        let coef = rf(&p2u).checked_div(&rf(&(&pu * &prob.p1)))?.scale(&i);
        let lp = prob.l.apply_rational(&rf(&pu))?.checked_div(&rf(&pu))?.scale(&i);
        let lp2 = prob.l.apply_rational(&rf(&p2u))?.checked_div(&rf(&p2u))?.scale(&i);
        let rhs = &(&e(&gs_sum)?.scale(&coef) - &ExpPoly::from(lp)) + &ExpPoly::from(lp2);
        let expr = &prob.l.apply(&gu)? - &rhs;
        report.identities.push(identity(
            "a1 = b2 = 0",
            "L(g(z-c)) = (i p2(z-c) / (p(z-c) p1)) e^{i(g + g(z-c))} - i L(p(z-c))/p(z-c) + i L(p2(z-c))/p2(z-c)",
            expr,
        ));
    }
    let phase_sum = &go + g;
    if report.bt1_b2_zero && !prob.p2.is_zero() {
        let rhs = rf(&(&prob.p * &prob.over(&prob.p5))).checked_div(&rf(&prob.p2))?;
        let expr = &e(&phase_sum)? - &ExpPoly::from(rhs);
        report.identities.push(identity(
            "bt1 = b2 = 0",
            "e^{i(g(z+c) + g)} = p p5(z+c) / p2, f = e^{ig} / (2 p5)",
            expr,
        ));
    }
    if report.bt2_b1_zero && !prob.p5.is_zero() {
        let rhs = rf(&(&prob.p2 * &prob.over(&prob.p))).checked_div(&rf(&prob.over(&prob.p5)))?;
        let expr = &e(&phase_sum)? - &ExpPoly::from(rhs);
        report.identities.push(identity(
            "bt2 = b1 = 0",
            "e^{i(g(z+c) + g)} = p2 p(z+c) / p5(z+c), f = p e^{-ig} / (2 p5)",
            expr,
        ));
    }
    Ok(report)
}
