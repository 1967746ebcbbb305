//! Problem model, derived quantities, case classification, exact residual
//! verification and the matrix factorization of `X^2 + Y^2 = eta`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, ExpTerm, LOperator, Tri};
use crate::polyalg::{Degree, MultiPoly, RationalFn};
use crate::scalars::{GaussianRational, Scalar};

/// `(p1 L f + p2 f(z+c) + p5 f)^2 + (p3 L f + p4 f(z+c) + p6 f)^2 = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub name: Option<String>,
    pub n: usize,
    pub p1: MultiPoly,
    pub p2: MultiPoly,
    pub p3: MultiPoly,
    pub p4: MultiPoly,
    pub p5: MultiPoly,
    pub p6: MultiPoly,
    pub p: MultiPoly,
    pub c: Vec<Scalar>,
    pub l: LOperator,
    pub assume_irreducible: bool,
}

impl Problem {
    /// `h(z + c)`.
    pub fn over(&self, h: &MultiPoly) -> MultiPoly {
        h.shift(&self.c, 1).expect("problem arity")
    }

    /// `h(z - c)`.
    pub fn under(&self, h: &MultiPoly) -> MultiPoly {
        h.shift(&self.c, -1).expect("problem arity")
    }

    pub fn over_e(&self, e: &ExpPoly) -> Result<ExpPoly> {
        e.shift(&self.c, 1)
    }

    pub fn under_e(&self, e: &ExpPoly) -> Result<ExpPoly> {
        e.shift(&self.c, -1)
    }

    pub fn constant(&self, s: Scalar) -> MultiPoly {
        MultiPoly::constant(self.n, s)
    }

    fn lhs_parts(&self, f: &ExpPoly) -> Result<(ExpPoly, ExpPoly)> {
        if f.arity() != self.n {
            return Err(Error::ArityMismatch { left: self.n, right: f.arity() });
        }
        let lf = self.l.apply(f)?;
        let fb = self.over_e(f)?;
        let lin = |a: &MultiPoly, b: &MultiPoly, c: &MultiPoly| -> ExpPoly {
            &(&lf.scale(&a.clone().into()) + &fb.scale(&b.clone().into())) + &f.scale(&c.clone().into())
        };
        Ok((lin(&self.p1, &self.p2, &self.p5), lin(&self.p3, &self.p4, &self.p6)))
    }

    /// Irreducibility status of `p`.
    pub fn irreducibility(&self) -> Irreducibility {
        irreducibility(&self.p, self.assume_irreducible)
    }
}

// ---------------------------------------------------------------------------
// Derived quantities and classification
// ---------------------------------------------------------------------------

/// Combinations of the coefficients used throughout, for a sign `k = +-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedQuantities {
    pub k: i32,
    /// `k p1 - i p3`
    pub a1: MultiPoly,
    /// `k p1 + i p3`
    pub a2: MultiPoly,
    /// `k p2 - i p4`
    pub b1: MultiPoly,
    /// `k p2 + i p4`
    pub b2: MultiPoly,
    /// `k p5 - i p6`
    pub bt1: MultiPoly,
    /// `k p5 + i p6`
    pub bt2: MultiPoly,
    /// `p2 p6 - p4 p5`
    pub d1: MultiPoly,
    /// `p3 p5 - p1 p6`
    pub d2: MultiPoly,
    /// `p1 p4 - p2 p3`
    pub det: MultiPoly,
}

fn pm(k: i32, x: &MultiPoly, sign: i64, y: &MultiPoly) -> MultiPoly {
    let kx = x.scale(&Scalar::int(k as i64));
    &kx + &y.scale(&Scalar::gaussian(0, sign))
}

pub fn check_k(k: i32) -> Result<()> {
    if k == 1 || k == -1 {
        Ok(())
    } else {
        Err(Error::Schema(format!("k must be 1 or -1, got {k}")))
    }
}

pub fn derive_quantities(prob: &Problem, k: i32) -> Result<DerivedQuantities> {
    check_k(k)?;
    Ok(DerivedQuantities {
        k,
        a1: pm(k, &prob.p1, -1, &prob.p3),
        a2: pm(k, &prob.p1, 1, &prob.p3),
        b1: pm(k, &prob.p2, -1, &prob.p4),
        b2: pm(k, &prob.p2, 1, &prob.p4),
        bt1: pm(k, &prob.p5, -1, &prob.p6),
        bt2: pm(k, &prob.p5, 1, &prob.p6),
        d1: &(&prob.p2 * &prob.p6) - &(&prob.p4 * &prob.p5),
        d2: &(&prob.p3 * &prob.p5) - &(&prob.p1 * &prob.p6),
        det: &(&prob.p1 * &prob.p4) - &(&prob.p2 * &prob.p3),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    /// `D != 0`, `d2 == 0`
    CaseI,
    /// `D == 0`, `d2 != 0`
    CaseII,
    /// `D == 0`, `d1 != 0`, `d2 == 0`
    CaseIII,
    /// `D != 0`, `d2 != 0`
    CaseIV,
    /// `D == d1 == d2 == 0`: the two squares are proportional.
    Degenerate,
}

impl CaseLabel {
    pub fn number(self) -> Option<u8> {
        match self {
            CaseLabel::CaseI => Some(1),
            CaseLabel::CaseII => Some(2),
            CaseLabel::CaseIII => Some(3),
            CaseLabel::CaseIV => Some(4),
            CaseLabel::Degenerate => None,
        }
    }

    pub fn from_number(n: u8) -> Option<CaseLabel> {
        match n {
            1 => Some(CaseLabel::CaseI),
            2 => Some(CaseLabel::CaseII),
            3 => Some(CaseLabel::CaseIII),
            4 => Some(CaseLabel::CaseIV),
            _ => None,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: CaseLabel,
    pub d1_zero: bool,
    pub d2_zero: bool,
    pub det_zero: bool,
}

pub fn classify(prob: &Problem) -> Classification {
    // d1, d2 and D do not depend on k.
    let q = derive_quantities(prob, 1).expect("k = 1");
    let (d1_zero, d2_zero, det_zero) = (q.d1.is_zero(), q.d2.is_zero(), q.det.is_zero());
    let label = match (det_zero, d1_zero, d2_zero) {
        (false, _, true) => CaseLabel::CaseI,
        (false, _, false) => CaseLabel::CaseIV,
        (true, _, false) => CaseLabel::CaseII,
        (true, false, true) => CaseLabel::CaseIII,
        (true, true, true) => CaseLabel::Degenerate,
    };
    Classification { label, d1_zero, d2_zero, det_zero }
}

// ---------------------------------------------------------------------------
// Residual and verification
// ---------------------------------------------------------------------------

/// Left-hand side minus right-hand side for a candidate `f`.
pub fn residual(prob: &Problem, f: &ExpPoly) -> Result<ExpPoly> {
    let (x, y) = prob.lhs_parts(f)?;
    Ok(&(&(&x * &x) + &(&y * &y)) - &ExpPoly::from(prob.p.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub verdict: Tri,
    pub residual: ExpPoly,
    /// Terms whose cancellation could not be decided.
    pub unresolved: Vec<ExpTerm>,
}

pub fn verify(prob: &Problem, f: &ExpPoly) -> Result<Verification> {
    let residual = residual(prob, f)?;
    let verdict = residual.is_zero_tri();
    let unresolved = if verdict == Tri::Unknown { residual.unresolved_terms() } else { Vec::new() };
    Ok(Verification { verdict, residual, unresolved })
}

// ---------------------------------------------------------------------------
// Matrix factorization
// ---------------------------------------------------------------------------

/// Solved form of `(eta1 s + eta2 t + eta5 u)^2 + (eta3 s + eta4 t + eta6 u)^2 = eta`:
///
/// ```text
/// (s, t)^T = 1/(2 i xi0) [[-zeta1, eta zeta2], [tau1, -eta tau2]] (e^{ig}, e^{-ig})^T
///          + (xi1, xi2)^T u / xi0
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEquation {
    pub k: i32,
    pub eta: [MultiPoly; 6],
    pub eta_rhs: MultiPoly,
    pub g: ExpPoly,
    pub xi0: MultiPoly,
    pub xi1: MultiPoly,
    pub xi2: MultiPoly,
    pub tau1: MultiPoly,
    pub tau2: MultiPoly,
    pub zeta1: MultiPoly,
    pub zeta2: MultiPoly,
}

pub fn equivalence_transform(eta: [MultiPoly; 6], eta_rhs: MultiPoly, k: i32, g: &ExpPoly) -> Result<MatrixEquation> {
    check_k(k)?;
    let [e1, e2, e3, e4, e5, e6] = &eta;
    let xi0 = &(e1 * e4) - &(e2 * e3);
    if xi0.is_zero() {
        return Err(Error::SingularXi0);
    }
    Ok(MatrixEquation {
        k,
        xi1: &(e2 * e6) - &(e4 * e5),
        xi2: &(e3 * e5) - &(e1 * e6),
        tau1: pm(k, e1, -1, e3),
        tau2: pm(k, e1, 1, e3),
        zeta1: pm(k, e2, -1, e4),
        zeta2: pm(k, e2, 1, e4),
        xi0,
        eta,
        eta_rhs,
        g: g.clone(),
    })
}

impl MatrixEquation {
    /// Entries of the 2x2 matrix before the `1/(2 i xi0)` factor.
    pub fn matrix(&self) -> [[MultiPoly; 2]; 2] {
        [[-&self.zeta1, &self.eta_rhs * &self.zeta2], [self.tau1.clone(), -&(&self.eta_rhs * &self.tau2)]]
    }

    /// `(s, t)` for a chosen value of `u`.
    pub fn assemble(&self, u: &ExpPoly) -> Result<(ExpPoly, ExpPoly)> {
        let n = self.xi0.arity();
        let eg = ExpPoly::exp_i(&self.g)?;
        let emg = ExpPoly::exp_i(&-&self.g)?;
        let two_i_xi0 = self.xi0.scale(&Scalar::gaussian(0, 2));
        let r = |p: &MultiPoly, d: &MultiPoly| RationalFn::new(p.clone(), d.clone());
        let m = self.matrix();
        let mut out = Vec::with_capacity(2);
        for (row, xi) in m.iter().zip([&self.xi1, &self.xi2]) {
            let v = &(&eg.scale(&r(&row[0], &two_i_xi0)?) + &emg.scale(&r(&row[1], &two_i_xi0)?))
                + &u.scale(&r(xi, &self.xi0)?);
            out.push(v);
        }
        debug_assert_eq!(out[0].arity(), n);
        let t = out.pop().unwrap();
        let s = out.pop().unwrap();
        Ok((s, t))
    }

    /// `X^2 + Y^2 - eta` with `X = eta1 s + eta2 t + eta5 u` and
    /// `Y = eta3 s + eta4 t + eta6 u` for the assembled `(s, t)`.
    pub fn forward_residual(&self, u: &ExpPoly) -> Result<ExpPoly> {
        let (s, t) = self.assemble(u)?;
        let e = |k: usize| -> RationalFn { self.eta[k].clone().into() };
        let x = &(&s.scale(&e(0)) + &t.scale(&e(1))) + &u.scale(&e(4));
        let y = &(&s.scale(&e(2)) + &t.scale(&e(3))) + &u.scale(&e(5));
        Ok(&(&(&x * &x) + &(&y * &y)) - &ExpPoly::from(self.eta_rhs.clone()))
    }
}

/// Which problem operators play the roles of `s`, `t`, `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Specialization {
    /// `s = L f`, `t = f(z+c)`, `u = f`
    OperatorShift,
    /// `s = L f`, `t = f`, `u = f(z+c)`
    OperatorIdentity,
    /// `s = f(z+c)`, `t = f`, `u = 0`
    ShiftIdentity,
}

impl Specialization {
    pub fn for_case(label: CaseLabel) -> Specialization {
        match label {
            CaseLabel::CaseII => Specialization::OperatorIdentity,
            CaseLabel::CaseIII => Specialization::ShiftIdentity,
            _ => Specialization::OperatorShift,
        }
    }

    pub fn etas(self, prob: &Problem) -> [MultiPoly; 6] {
        let z = MultiPoly::zero(prob.n);
        let p = |x: &MultiPoly| x.clone();
        match self {
            Specialization::OperatorShift => {
                [p(&prob.p1), p(&prob.p2), p(&prob.p3), p(&prob.p4), p(&prob.p5), p(&prob.p6)]
            }
            Specialization::OperatorIdentity => {
                [p(&prob.p1), p(&prob.p5), p(&prob.p3), p(&prob.p6), p(&prob.p2), p(&prob.p4)]
            }
            Specialization::ShiftIdentity => [p(&prob.p2), p(&prob.p5), p(&prob.p4), p(&prob.p6), z.clone(), z],
        }
    }
}

// ---------------------------------------------------------------------------
// Irreducibility of p
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    /// Non-zero constant.
    Unit,
    /// Total degree 1.
    Linear,
    /// Univariate of degree 2 or 3 with no root in Q(i).
    CertifiedUnivariate,
    /// A root in Q(i) was found.
    Reducible,
    /// Not decided here; the problem file asserts irreducibility.
    Assumed,
    /// Not decided here.
    Unverified,
}

/// Decides irreducibility for the cases that are cheap to certify.
pub fn irreducibility(p: &MultiPoly, assume: bool) -> Irreducibility {
    match p.total_degree() {
        Degree::Finite(0) => return Irreducibility::Unit,
        Degree::Finite(1) => return Irreducibility::Linear,
        _ => {}
    }
    let vars = p.support_vars();
    let fallback = if assume { Irreducibility::Assumed } else { Irreducibility::Unverified };
    if vars.len() != 1 {
        return fallback;
    }
    let j = vars[0];
    let Degree::Finite(deg) = p.degree_in(j).unwrap() else { return fallback };
    if deg > 3 {
        return fallback;
    }
    let mut coeffs = vec![GaussianRational::zero(); deg as usize + 1];
    for (m, c) in p.terms() {
        match c.as_gaussian() {
            Some(g) => coeffs[m.0[j - 1] as usize] = g,
            None => return fallback,
        }
    }
    if has_gaussian_root(&coeffs) {
        Irreducibility::Reducible
    } else {
        Irreducibility::CertifiedUnivariate
    }
}

/// Whether a polynomial of degree 2 or 3 with Gaussian-rational
/// coefficients (constant term first) has a root in Q(i).
fn has_gaussian_root(coeffs: &[GaussianRational]) -> bool {
    use num_complex::Complex64;
    use num_traits::{One, Zero};
    let deg = coeffs.len() - 1;
    // Clear denominators to Gaussian integers, then substitute y = lead * x to
    // get a monic polynomial over Z[i]; its roots in Q(i) are Gaussian integers.
    let mut lcm = num_bigint::BigInt::one();
    for c in coeffs {
        lcm = num_integer::Integer::lcm(&lcm, c.re.denom());
        lcm = num_integer::Integer::lcm(&lcm, c.im.denom());
    }
    let scale = GaussianRational::real(num_rational::BigRational::from(lcm));
    let ints: Vec<GaussianRational> = coeffs.iter().map(|c| c * &scale).collect();
    let lead = ints[deg].clone();
    let mut monic = vec![GaussianRational::zero(); deg + 1];
    let mut lp = GaussianRational::one();
    for kk in (0..=deg).rev() {
        monic[kk] = if kk == deg { GaussianRational::one() } else { &ints[kk] * &lp };
        if kk < deg {
            lp = &lp * &lead;
        }
    }
    let eval = |y: &GaussianRational| monic.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * y) + c);
    // Numeric roots of the monic polynomial by Durand-Kerner, then exact checks
    // of the nearby Gaussian integers.
    let mc: Vec<Complex64> = monic.iter().map(|c| c.to_complex()).collect();
    let mut roots: Vec<Complex64> = (0..deg).map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1)).collect();
    let bound = 1.0 + mc.iter().take(deg).map(|c| c.norm()).fold(0.0, f64::max);
    for r in roots.iter_mut() {
        *r *= bound;
    }
    for _ in 0..500 {
        for a in 0..deg {
            let val = mc.iter().rev().fold(Complex64::zero(), |acc, c| acc * roots[a] + c);
            let mut den = Complex64::new(1.0, 0.0);
            for b in 0..deg {
                if a != b {
                    den *= roots[a] - roots[b];
                }
            }
            if den.norm() > 0.0 {
                roots[a] -= val / den;
            }
        }
    }
    roots.iter().any(|r| {
        let (re, im) = (r.re.round(), r.im.round());
        (-1..=1).any(|dr| {
            (-1..=1).any(|di| {
                let y = GaussianRational::from_ints(re as i64 + dr, im as i64 + di);
                eval(&y).is_zero()
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprio::parse_expr;

    fn poly(s: &str, n: usize) -> MultiPoly {
        parse_expr(s, n).unwrap().as_poly().unwrap()
    }

    #[test]
    fn irreducibility_small_cases() {
        assert_eq!(irreducibility(&poly("3", 2), false), Irreducibility::Unit);
        assert_eq!(irreducibility(&poly("z1 + z2", 2), false), Irreducibility::Linear);
        assert_eq!(irreducibility(&poly("z1^2 + 1", 2), false), Irreducibility::Reducible);
        assert_eq!(irreducibility(&poly("z1^2 - 2", 2), false), Irreducibility::CertifiedUnivariate);
        assert_eq!(irreducibility(&poly("2*z2^3 - z2^2 - 4*z2 + 2", 2), false), Irreducibility::Reducible);
        assert_eq!(irreducibility(&poly("z2^3 - 2", 2), false), Irreducibility::CertifiedUnivariate);
        assert_eq!(irreducibility(&poly("z1*z2 + 1", 2), true), Irreducibility::Assumed);
    }

    #[test]
    fn singular_xi0() {
        let z = MultiPoly::zero(1);
        let one = MultiPoly::one(1);
        let r = equivalence_transform(
            [one.clone(), one.clone(), one.clone(), one.clone(), z.clone(), z],
            one,
            1,
            &ExpPoly::zero(1),
        );
        assert_eq!(r.unwrap_err(), Error::SingularXi0);
    }
}
