//! Exponential polynomials with nested phases.
//!
//! An `ExpPoly` is a finite sum of terms `r(z) * e^{i phi(z)} * e^{i theta}`
//! where `r` is a rational function, `phi` is itself an `ExpPoly` with
//! polynomial coefficients and no constant part, and `theta` is a constant
//! scalar. Sums are kept in a canonical form: terms sorted by
//! `(phi, theta)`, like terms merged, zero coefficients dropped, quarter
//! turns of `theta` folded into the coefficient.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalg::{join_signed, MultiPoly, RationalFn};
use crate::scalars::Scalar;

/// Three-valued outcome of an exact zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Tri {
    Zero,
    NonZero,
    Unknown,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tri::Zero => "Zero",
            Tri::NonZero => "NonZero",
            Tri::Unknown => "Unknown",
        };
        write!(f, "{s}")
    }
}

/// Coarse growth class of an `ExpPoly`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Shape {
    Constant,
    PolynomialNonConstant,
    /// No exponential factor but a denominator that did not cancel.
    RationalNonPolynomial,
    Transcendental,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Body of an exponential factor `e^{i body}`. The body has polynomial
/// coefficients and its phase-free part has no constant monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Arc<ExpPoly>);

impl Phase {
    pub fn body(&self) -> &ExpPoly {
        &self.0
    }
}

/// `coeff * e^{i phase} * e^{i residual}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpTerm {
    pub phase: Option<Phase>,
    pub residual: Scalar,
    pub coeff: RationalFn,
}

impl ExpTerm {
    fn same_key(&self, o: &ExpTerm) -> bool {
        self.phase == o.phase && self.residual == o.residual
    }

    fn key_cmp(&self, o: &ExpTerm) -> Ordering {
        self.phase.cmp(&o.phase).then_with(|| self.residual.cmp(&o.residual))
    }

    fn phase_body(&self, arity: usize) -> ExpPoly {
        self.phase.as_ref().map_or_else(|| ExpPoly::zero(arity), |p| p.body().clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpPoly {
    arity: usize,
    terms: Vec<ExpTerm>,
}

/// Builds the normalized term `coeff * e^{i (body + residual)}`.
fn make_term(mut coeff: RationalFn, mut body: ExpPoly, residual: Scalar) -> ExpTerm {
    let mut theta = residual;
    if let Some(pos) = body.terms.iter().position(|t| t.phase.is_none() && t.residual.is_zero()) {
        let t = &mut body.terms[pos];
        let poly = t.coeff.as_poly().expect("phase coefficients are polynomial");
        let c0 = poly.constant_term();
        if !c0.is_zero() {
            theta = &theta + &c0;
            let rest = poly - &MultiPoly::constant(poly.arity(), c0);
            if rest.is_zero() {
                body.terms.remove(pos);
            } else {
                t.coeff = rest.into();
            }
        }
    }
    let (unit, theta) = theta.split_unit_phase();
    if unit != 0 {
        coeff = coeff.scale(&Scalar::unit(unit));
    }
    let phase = (!body.is_zero()).then(|| Phase(Arc::new(body)));
    ExpTerm { phase, residual: theta, coeff }
}

impl ExpPoly {
    fn normalize(arity: usize, mut terms: Vec<ExpTerm>) -> ExpPoly {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<ExpTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.same_key(&t) => {
                    last.coeff = &last.coeff + &t.coeff;
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        ExpPoly { arity, terms: out }
    }

    pub fn zero(arity: usize) -> Self {
        ExpPoly { arity, terms: Vec::new() }
    }

    pub fn one(arity: usize) -> Self {
        ExpPoly::constant(arity, Scalar::one())
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        RationalFn::constant(arity, c).into()
    }

    pub fn var(arity: usize, j: usize) -> Result<Self> {
        Ok(MultiPoly::var(arity, j)?.into())
    }

    /// `e^{i body}`. Fails when the body is not entire, i.e. carries a
    /// non-trivial denominator anywhere.
    pub fn exp_i(body: &ExpPoly) -> Result<Self> {
        if !body.has_polynomial_coeffs() {
            return Err(Error::NonPolynomialPhase);
        }
        let t = make_term(RationalFn::one(body.arity), body.clone(), Scalar::zero());
        Ok(ExpPoly { arity: body.arity, terms: vec![t] })
    }

    /// `e^{i theta}` for a constant `theta`.
    pub fn exp_i_const(arity: usize, theta: &Scalar) -> Self {
        let t = make_term(RationalFn::one(arity), ExpPoly::zero(arity), theta.clone());
        ExpPoly { arity, terms: vec![t] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient, including those inside phases, is a
    /// polynomial.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coeff.as_poly().is_some() && t.phase.as_ref().is_none_or(|p| p.body().has_polynomial_coeffs()))
    }

    /// True when no denominator anywhere is non-constant.
    pub fn has_constant_denominators(&self) -> bool {
        self.terms.iter().all(|t| {
            t.coeff.den().is_constant() && t.phase.as_ref().is_none_or(|p| p.body().has_constant_denominators())
        })
    }

    /// The rational function when there is no exponential factor at all.
    pub fn as_rational(&self) -> Option<RationalFn> {
        match self.terms.as_slice() {
            [] => Some(RationalFn::zero(self.arity)),
            [t] if t.phase.is_none() && t.residual.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<MultiPoly> {
        self.as_rational().and_then(|r| r.as_poly().cloned())
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_rational().and_then(|r| r.as_constant())
    }

    fn check_arity(&self, o: &ExpPoly) -> Result<()> {
        if self.arity == o.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch { left: self.arity, right: o.arity })
        }
    }

    pub fn checked_add(&self, o: &ExpPoly) -> Result<ExpPoly> {
        self.check_arity(o)?;
        let terms = self.terms.iter().chain(&o.terms).cloned().collect();
        Ok(ExpPoly::normalize(self.arity, terms))
    }

    pub fn checked_sub(&self, o: &ExpPoly) -> Result<ExpPoly> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &ExpPoly) -> Result<ExpPoly> {
        self.check_arity(o)?;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                let coeff = &a.coeff * &b.coeff;
                if coeff.is_zero() {
                    continue;
                }
                let residual = &a.residual + &b.residual;
                let t = match (&a.phase, &b.phase) {
                    (None, None) => make_term(coeff, ExpPoly::zero(self.arity), residual),
                    (Some(p), None) | (None, Some(p)) => make_term(coeff, p.body().clone(), residual),
                    (Some(p), Some(q)) => make_term(coeff, p.body() + q.body(), residual),
                };
                terms.push(t);
            }
        }
        Ok(ExpPoly::normalize(self.arity, terms))
    }

    /// Multiplies every coefficient by `r`.
    pub fn scale(&self, r: &RationalFn) -> ExpPoly {
        let terms = self.terms.iter().map(|t| ExpTerm { coeff: &t.coeff * r, ..t.clone() }).collect();
        ExpPoly::normalize(self.arity, terms)
    }

    pub fn scale_scalar(&self, c: &Scalar) -> ExpPoly {
        self.scale(&RationalFn::constant(self.arity, c.clone()))
    }

    /// Division by a rational function.
    pub fn div_rational(&self, r: &RationalFn) -> Result<ExpPoly> {
        let inv = RationalFn::one(self.arity).checked_div(r)?;
        Ok(self.scale(&inv))
    }

    /// Division by an expression with no exponential factor.
    pub fn checked_div(&self, o: &ExpPoly) -> Result<ExpPoly> {
        self.check_arity(o)?;
        if o.is_zero() {
            return Err(Error::DivisionByZeroExpression);
        }
        match o.as_rational() {
            Some(r) => self.div_rational(&r),
            None => Err(Error::WrongShape("division by an exponential expression".into())),
        }
    }

    pub fn pow(&self, e: u32) -> ExpPoly {
        let mut acc = ExpPoly::one(self.arity);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in `z_j`:
    /// `d(r e^{i phi}) = (dr + i r dphi) e^{i phi}`.
    pub fn derive(&self, j: usize) -> Result<ExpPoly> {
        if j == 0 || j > self.arity {
            return Err(Error::BadIndex { index: j, arity: self.arity });
        }
        let mut out = ExpPoly::zero(self.arity);
        for t in &self.terms {
            let dr = ExpTerm { coeff: t.coeff.derive(j)?, ..t.clone() };
            let mut piece = ExpPoly::normalize(self.arity, vec![dr]);
            if let Some(p) = &t.phase {
                let dphi = p.body().derive(j)?;
                let base = ExpTerm { coeff: t.coeff.scale(&Scalar::i()), ..t.clone() };
                piece = &piece + &(&ExpPoly { arity: self.arity, terms: vec![base] } * &dphi);
            }
            out = &out + &piece;
        }
        Ok(out)
    }

    /// `e(z + sign*c)`, applied to coefficients and recursively to phases.
    pub fn shift(&self, c: &[Scalar], sign: i32) -> Result<ExpPoly> {
        if c.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: c.len() });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let coeff = t.coeff.shift(c, sign)?;
            let body = match &t.phase {
                Some(p) => p.body().shift(c, sign)?,
                None => ExpPoly::zero(self.arity),
            };
            terms.push(make_term(coeff, body, t.residual.clone()));
        }
        Ok(ExpPoly::normalize(self.arity, terms))
    }

    /// Exact zero test. `Zero` iff the canonical form is empty. `NonZero`
    /// when some phase group consists of a single term and its phase
    /// provably differs by a non-constant from every other group's phase
    /// (Borel's theorem on exponential sums). `Unknown` otherwise.
    pub fn is_zero_tri(&self) -> Tri {
        if self.terms.is_empty() {
            return Tri::Zero;
        }
        let groups = self.phase_groups();
        let bodies: Vec<ExpPoly> = groups.iter().map(|g| g[0].phase_body(self.arity)).collect();
        'outer: for (a, g) in groups.iter().enumerate() {
            if g.len() != 1 {
                continue;
            }
            for (b, other) in bodies.iter().enumerate() {
                if a != b && !(&bodies[a] - other).provably_nonconstant() {
                    continue 'outer;
                }
            }
            return Tri::NonZero;
        }
        Tri::Unknown
    }

    /// Terms responsible for an `Unknown` zero verdict: the members of every
    /// phase group with more than one term.
    pub fn unresolved_terms(&self) -> Vec<ExpTerm> {
        self.phase_groups()
            .into_iter()
            .filter(|g| g.len() > 1)
            .flat_map(|g| g.iter().map(|t| (*t).clone()).collect::<Vec<_>>())
            .collect()
    }

    fn phase_groups(&self) -> Vec<Vec<&ExpTerm>> {
        let mut groups: Vec<Vec<&ExpTerm>> = Vec::new();
        for t in &self.terms {
            match groups.last_mut() {
                Some(g) if g[0].phase == t.phase => g.push(t),
                _ => groups.push(vec![t]),
            }
        }
        groups
    }

    /// Some partial derivative is provably nonzero.
    pub fn provably_nonconstant(&self) -> bool {
        (1..=self.arity).any(|j| self.derive(j).map(|d| d.is_zero_tri() == Tri::NonZero).unwrap_or(false))
    }

    /// Every partial derivative is exactly zero.
    pub fn provably_constant(&self) -> bool {
        (1..=self.arity).all(|j| self.derive(j).map(|d| d.is_zero()).unwrap_or(false))
    }

    /// Semantic equality as a zero test of the difference.
    pub fn equals(&self, o: &ExpPoly) -> Tri {
        match self.checked_sub(o) {
            Ok(d) => d.is_zero_tri(),
            Err(_) => Tri::NonZero,
        }
    }

    pub fn classify_shape(&self) -> Shape {
        let nonconstant_phase =
            self.terms.iter().any(|t| t.phase.as_ref().is_some_and(|p| !p.body().provably_constant()));
        if nonconstant_phase {
            return Shape::Transcendental;
        }
        if self.provably_constant() {
            return Shape::Constant;
        }
        if self.terms.iter().all(|t| t.coeff.as_poly().is_some()) {
            Shape::PolynomialNonConstant
        } else {
            Shape::RationalNonPolynomial
        }
    }
}

impl From<RationalFn> for ExpPoly {
    fn from(r: RationalFn) -> Self {
        let arity = r.arity();
        if r.is_zero() {
            return ExpPoly::zero(arity);
        }
        ExpPoly { arity, terms: vec![ExpTerm { phase: None, residual: Scalar::zero(), coeff: r }] }
    }
}

impl From<MultiPoly> for ExpPoly {
    fn from(p: MultiPoly) -> Self {
        RationalFn::from(p).into()
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, o: &ExpPoly) -> ExpPoly {
        self.checked_add(o).expect("exponential polynomial arity mismatch")
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, o: &ExpPoly) -> ExpPoly {
        self.checked_sub(o).expect("exponential polynomial arity mismatch")
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, o: &ExpPoly) -> ExpPoly {
        self.checked_mul(o).expect("exponential polynomial arity mismatch")
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        let terms = self.terms.iter().map(|t| ExpTerm { coeff: -&t.coeff, ..t.clone() }).collect();
        ExpPoly { arity: self.arity, terms }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, o: ExpPoly) -> ExpPoly { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Linear differential operator
// ---------------------------------------------------------------------------

/// `L = sum_j q_j d/dz_j` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LOperator {
    arity: usize,
    entries: Vec<(usize, MultiPoly)>,
}

impl LOperator {
    /// Entries are `(j, q_j)` with 1-based `j`; duplicates are rejected.
    pub fn new(arity: usize, mut entries: Vec<(usize, MultiPoly)>) -> Result<Self> {
        entries.sort_by_key(|(j, _)| *j);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Schema(format!("duplicate operator variable z{}", w[0].0)));
            }
        }
        for (j, q) in &entries {
            if *j == 0 || *j > arity {
                return Err(Error::BadIndex { index: *j, arity });
            }
            if q.arity() != arity {
                return Err(Error::ArityMismatch { left: arity, right: q.arity() });
            }
        }
        Ok(LOperator { arity, entries })
    }

    /// `d/dz_j`.
    pub fn partial(arity: usize, j: usize) -> Result<Self> {
        LOperator::new(arity, vec![(j, MultiPoly::one(arity))])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[(usize, MultiPoly)] {
        &self.entries
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.entries.iter().all(|(_, q)| q.is_constant())
    }

    /// `Some(j)` when `L = d/dz_j` exactly.
    pub fn single_partial(&self) -> Option<usize> {
        match self.entries.as_slice() {
            [(j, q)] if q.is_one() => Some(*j),
            _ => None,
        }
    }

    pub fn apply(&self, e: &ExpPoly) -> Result<ExpPoly> {
        if e.arity() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: e.arity() });
        }
        let mut out = ExpPoly::zero(self.arity);
        for (j, q) in &self.entries {
            out = &out + &e.derive(*j)?.scale(&q.clone().into());
        }
        Ok(out)
    }

    pub fn apply_rational(&self, r: &RationalFn) -> Result<RationalFn> {
        let e = self.apply(&r.clone().into())?;
        Ok(e.as_rational().expect("derivative of a rational function is rational"))
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn wrap_coeff(r: &RationalFn) -> String {
    let s = r.to_string();
    let simple = r.den().is_one() && r.num().len() == 1;
    if simple {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for ExpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let has_exp = self.phase.is_some() || !self.residual.is_zero();
        if !has_exp {
            return write!(f, "{}", self.coeff);
        }
        let mut arg = match &self.phase {
            Some(p) => p.body().to_string(),
            None => String::new(),
        };
        if !self.residual.is_zero() {
            let r = self.residual.to_string();
            arg = if arg.is_empty() { r } else { join_signed(vec![arg, r]) };
        }
        let e = format!("E({arg})");
        if self.coeff.is_one() {
            write!(f, "{e}")
        } else if (-&self.coeff).is_one() {
            write!(f, "-{e}")
        } else {
            write!(f, "{}*{e}", wrap_coeff(&self.coeff))
        }
    }
}

impl fmt::Display for ExpPoly {
    /// Canonical text; reparses to the same normal form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts = self
            .terms
            .iter()
            .map(|t| {
                let s = t.to_string();
                // A leading sum in the coefficient must not merge with the sign.
                if t.phase.is_none() && t.residual.is_zero() && self.terms.len() > 1 && t.coeff.num().len() > 1 {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect();
        write!(f, "{}", join_signed(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(j: usize) -> ExpPoly {
        ExpPoly::var(2, j).unwrap()
    }

    fn k(n: i64) -> ExpPoly {
        ExpPoly::constant(2, Scalar::int(n))
    }

    fn e(body: &ExpPoly) -> ExpPoly {
        ExpPoly::exp_i(body).unwrap()
    }

    #[test]
    fn phases_add_and_cancel() {
        let g = &z(1) + &(&z(2) * &z(2));
        let prod = &e(&g) * &e(&-&g);
        assert_eq!(prod, k(1));
    }

    #[test]
    fn constant_parts_fold() {
        let pi = ExpPoly::constant(2, Scalar::pi());
        let a = e(&(&z(1) + &pi));
        assert_eq!(a, -&e(&z(1)));
        let half = ExpPoly::constant(2, Scalar::rational(1, 2).mul(Scalar::pi()));
        assert_eq!(e(&half), ExpPoly::constant(2, Scalar::i()));
    }

    #[test]
    fn zero_test_distinct_phases() {
        let s = &e(&z(1)) + &e(&(&z(1) * &k(2)));
        assert_eq!(s.is_zero_tri(), Tri::NonZero);
        let c3 = ExpPoly::constant(2, Scalar::int(3));
        let u = &(&e(&c3) * &z(1)) - &z(1);
        assert_eq!(u.is_zero_tri(), Tri::Unknown);
        assert_eq!((&s - &s).is_zero_tri(), Tri::Zero);
    }

    #[test]
    fn derivative_chain_rule() {
        let g = &z(1) * &z(1);
        let d = e(&g).derive(1).unwrap();
        let expect = &(&z(1) * &ExpPoly::constant(2, Scalar::gaussian(0, 2))) * &e(&g);
        assert_eq!(d, expect);
    }

    #[test]
    fn nested_shift() {
        // z2 + z1 e^{-2 i z2} shifted by z2 -> z2 - pi/2.
        let inner = e(&(&z(2) * &k(-2)));
        let g = &z(2) + &(&z(1) * &inner);
        let c = [Scalar::zero(), Scalar::rational(1, 2).mul(Scalar::pi())];
        let gs = g.shift(&c, -1).unwrap();
        let sum = &g + &gs;
        assert_eq!(sum.classify_shape(), Shape::PolynomialNonConstant);
        let expect = &(&z(2) * &k(2)) - &ExpPoly::constant(2, Scalar::rational(1, 2).mul(Scalar::pi()));
        assert_eq!(sum, expect);
    }

    #[test]
    fn shapes() {
        assert_eq!(k(4).classify_shape(), Shape::Constant);
        assert_eq!(z(1).classify_shape(), Shape::PolynomialNonConstant);
        assert_eq!(e(&z(1)).classify_shape(), Shape::Transcendental);
        assert_eq!(ExpPoly::zero(2).classify_shape(), Shape::Constant);
    }

    #[test]
    fn rejects_rational_phase() {
        let r = ExpPoly::from(RationalFn::new(MultiPoly::one(2), MultiPoly::var(2, 1).unwrap()).unwrap());
        assert_eq!(ExpPoly::exp_i(&r), Err(Error::NonPolynomialPhase));
    }
}
