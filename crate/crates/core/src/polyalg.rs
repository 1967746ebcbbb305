//! Multivariate polynomials and rational functions over Q(i)[pi].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalars::{GaussianRational, Scalar};

/// Exponent vector ordered graded-lexicographically (total degree first,
/// then by the exponent of `z1`, `z2`, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&o.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial degree with a sentinel for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    /// `self - other`, or `None` when either side is the zero sentinel.
    pub fn minus(self, other: Degree) -> Option<i64> {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Some(a as i64 - b as i64),
            _ => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity.cmp(&other.arity).then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_arity(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ArityMismatch { left: a, right: b })
    }
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arity), c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        MultiPoly::constant(arity, Scalar::one())
    }

    /// The variable `z_j`, with `j` 1-based.
    pub fn var(arity: usize, j: usize) -> Result<Self> {
        if j == 0 || j > arity {
            return Err(Error::BadIndex { index: j, arity });
        }
        let mut e = vec![0; arity];
        e[j - 1] = 1;
        Ok(MultiPoly::monomial(Monomial(e), Scalar::one()))
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let arity = m.0.len();
        let mut p = MultiPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = MultiPoly::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.0.len(), arity, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar value when the polynomial has degree at most 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Monomial::one(self.arity)).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms.keys().map(|m| m.degree()).max().map_or(Degree::NegInf, Degree::Finite)
    }

    pub fn degree_in(&self, j: usize) -> Result<Degree> {
        if j == 0 || j > self.arity {
            return Err(Error::BadIndex { index: j, arity: self.arity });
        }
        Ok(self.terms.keys().map(|m| m.0[j - 1]).max().map_or(Degree::NegInf, Degree::Finite))
    }

    pub fn checked_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        check_arity(self.arity, o.arity)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        check_arity(self.arity, o.arity)?;
        let mut out = MultiPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        MultiPoly::from_terms(self.arity, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> MultiPoly {
        MultiPoly::from_terms(self.arity, self.terms.iter().map(|(m, x)| (m.clone(), x.scale(g))))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.arity);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient-wise complex conjugation.
    pub fn conj(&self) -> MultiPoly {
        MultiPoly::from_terms(self.arity, self.terms.iter().map(|(m, x)| (m.clone(), x.conj())))
    }

    /// Partial derivative in `z_j` (1-based).
    pub fn derive(&self, j: usize) -> Result<MultiPoly> {
        if j == 0 || j > self.arity {
            return Err(Error::BadIndex { index: j, arity: self.arity });
        }
        let terms = self.terms.iter().filter(|(m, _)| m.0[j - 1] > 0).map(|(m, c)| {
            let e = m.0[j - 1];
            let mut m2 = m.clone();
            m2.0[j - 1] -= 1;
            (m2, c * &Scalar::int(e as i64))
        });
        Ok(MultiPoly::from_terms(self.arity, terms))
    }

    /// `p(z + sign*c)`.
    pub fn shift(&self, c: &[Scalar], sign: i32) -> Result<MultiPoly> {
        check_arity(self.arity, c.len())?;
        let sc: Vec<Scalar> = c.iter().map(|x| if sign < 0 { -x } else { x.clone() }).collect();
        // Powers (z_j + s c_j)^e are cached per variable.
        let mut cache: Vec<Vec<MultiPoly>> = (0..self.arity)
            .map(|j| {
                let lin = &MultiPoly::var(self.arity, j + 1).unwrap() + &MultiPoly::constant(self.arity, sc[j].clone());
                vec![MultiPoly::one(self.arity), lin]
            })
            .collect();
        let mut out = MultiPoly::zero(self.arity);
        for (m, coef) in &self.terms {
            let mut term = MultiPoly::constant(self.arity, coef.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if sc[j].is_zero() {
                    let mut mono = Monomial::one(self.arity);
                    mono.0[j] = e;
                    term = &term * &MultiPoly::monomial(mono, Scalar::one());
                    continue;
                }
                while cache[j].len() <= e as usize {
                    let next = &cache[j][cache[j].len() - 1] * &cache[j][1];
                    cache[j].push(next);
                }
                term = &term * &cache[j][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (m, c)| acc + c.to_complex() * monomial_value(m, z))
    }

    /// Sum of the absolute values of the terms at `z`; used as a cancellation
    /// scale.
    pub fn eval_abs_scale(&self, z: &[Complex64]) -> f64 {
        self.terms.iter().map(|(m, c)| (c.to_complex() * monomial_value(m, z)).norm()).sum()
    }

    /// Exact quotient when `d` divides `self`, found by multivariate division
    /// on graded-lex leading terms.
    pub fn try_div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if self.arity != d.arity || d.is_zero() {
            return None;
        }
        let (dm, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.arity);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm)?;
            let qc = rc.try_div(dc)?;
            let t = MultiPoly::monomial(qm, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.arity);
        };
        let mut g = first.clone();
        for m in it {
            for (a, b) in g.0.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        g
    }

    fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(t, c)| (t.div(m).expect("monomial divides"), c.clone())),
        )
    }

    /// True when only variable `j` (1-based) occurs.
    pub fn is_univariate_in(&self, j: usize) -> bool {
        self.terms.keys().all(|m| m.0.iter().enumerate().all(|(k, &e)| k + 1 == j || e == 0))
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (1..=self.arity).filter(|&j| self.terms.keys().any(|m| m.0[j - 1] > 0)).collect()
    }
}

pub(crate) fn monomial_value(m: &Monomial, z: &[Complex64]) -> Complex64 {
    m.0.iter().zip(z).fold(Complex64::new(1.0, 0.0), |acc, (&e, zj)| acc * zj.powu(e))
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.checked_add(o).expect("polynomial arity mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.checked_sub(o).expect("polynomial arity mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.checked_mul(o).expect("polynomial arity mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::from_terms(self.arity, self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| if e == 1 { format!("z{}", j + 1) } else { format!("z{}^{}", j + 1, e) })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn join_signed(parts: Vec<String>) -> String {
    let mut out = String::new();
    for (k, p) in parts.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    /// Leading term first; the output parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.is_one() {
                    return c.to_string();
                }
                let mono = fmt_monomial(m);
                if c.is_one() {
                    mono
                } else if (-c).is_one() {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", join_signed(parts))
    }
}

// ---------------------------------------------------------------------------
// RationalFn
// ---------------------------------------------------------------------------

/// `num / den`. After normalization the leading Gaussian-rational factor of
/// the denominator's leading coefficient is 1, common monomial content is
/// removed, and `den | num` has been tried by exact division.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl From<MultiPoly> for RationalFn {
    fn from(p: MultiPoly) -> Self {
        let arity = p.arity;
        RationalFn { num: p, den: MultiPoly::one(arity) }
    }
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        check_arity(num.arity, den.arity)?;
        if den.is_zero() {
            return Err(Error::DivisionByZeroExpression);
        }
        Ok(RationalFn { num, den }.simplified())
    }

    pub fn zero(arity: usize) -> Self {
        MultiPoly::zero(arity).into()
    }

    pub fn one(arity: usize) -> Self {
        MultiPoly::one(arity).into()
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        MultiPoly::constant(arity, c).into()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.num.is_zero() {
            return Some(Scalar::zero());
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.try_div(&d)
    }

    fn simplified(self) -> RationalFn {
        let RationalFn { mut num, mut den } = self;
        let arity = num.arity;
        if num.is_zero() {
            return RationalFn { num, den: MultiPoly::one(arity) };
        }
        let lead = den.leading_term().unwrap().1.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero leading coefficient");
            num = num.scale_gaussian(&inv);
            den = den.scale_gaussian(&inv);
        }
        if !den.is_constant() || den.len() > 1 {
            let nc = num.monomial_content();
            let dc = den.monomial_content();
            let common = Monomial(nc.0.iter().zip(&dc.0).map(|(a, b)| *a.min(b)).collect());
            if !common.is_one() {
                num = num.div_monomial(&common);
                den = den.div_monomial(&common);
            }
        }
        if !den.is_one() {
            if let Some(q) = num.try_div_exact(&den) {
                return RationalFn { num: q, den: MultiPoly::one(arity) };
            }
        }
        RationalFn { num, den }
    }

    pub fn checked_add(&self, o: &RationalFn) -> Result<RationalFn> {
        check_arity(self.arity(), o.arity())?;
        if self.den == o.den {
            return Ok(RationalFn { num: &self.num + &o.num, den: self.den.clone() }.simplified());
        }
        if let Some(q) = o.den.try_div_exact(&self.den) {
            let num = &(&self.num * &q) + &o.num;
            return Ok(RationalFn { num, den: o.den.clone() }.simplified());
        }
        if let Some(q) = self.den.try_div_exact(&o.den) {
            let num = &self.num + &(&o.num * &q);
            return Ok(RationalFn { num, den: self.den.clone() }.simplified());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Ok(RationalFn { num, den: &self.den * &o.den }.simplified())
    }

    pub fn checked_mul(&self, o: &RationalFn) -> Result<RationalFn> {
        check_arity(self.arity(), o.arity())?;
        if self.is_zero() || o.is_zero() {
            return Ok(RationalFn::zero(self.arity()));
        }
        if self.den.is_one() && o.den.is_one() {
            return Ok((&self.num * &o.num).into());
        }
        Ok(RationalFn { num: &self.num * &o.num, den: &self.den * &o.den }.simplified())
    }

    pub fn checked_div(&self, o: &RationalFn) -> Result<RationalFn> {
        check_arity(self.arity(), o.arity())?;
        if o.is_zero() {
            return Err(Error::DivisionByZeroExpression);
        }
        RationalFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &Scalar) -> RationalFn {
        RationalFn { num: self.num.scale(c), den: self.den.clone() }.simplified()
    }

    pub fn conj(&self) -> RationalFn {
        RationalFn { num: self.num.conj(), den: self.den.conj() }.simplified()
    }

    pub fn pow(&self, e: u32) -> RationalFn {
        RationalFn { num: self.num.pow(e), den: self.den.pow(e) }.simplified()
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, o: &RationalFn) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    pub fn derive(&self, j: usize) -> Result<RationalFn> {
        let dn = self.num.derive(j)?;
        if self.den.is_constant() {
            return Ok(RationalFn { num: dn, den: self.den.clone() }.simplified());
        }
        let dd = self.den.derive(j)?;
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(RationalFn { num, den: &self.den * &self.den }.simplified())
    }

    pub fn shift(&self, c: &[Scalar], sign: i32) -> Result<RationalFn> {
        Ok(RationalFn { num: self.num.shift(c, sign)?, den: self.den.shift(c, sign)? }.simplified())
    }

    /// `(num, den)` values at `z`, plus the cancellation scale of the
    /// denominator.
    pub fn eval_parts(&self, z: &[Complex64]) -> (Complex64, Complex64, f64) {
        (self.num.eval(z), self.den.eval(z), self.den.eval_abs_scale(z))
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, o: &RationalFn) -> RationalFn {
        self.checked_add(o).expect("rational function arity mismatch")
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, o: &RationalFn) -> RationalFn {
        self.checked_add(&-o).expect("rational function arity mismatch")
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, o: &RationalFn) -> RationalFn {
        self.checked_mul(o).expect("rational function arity mismatch")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

fn paren_if_sum(p: &MultiPoly) -> String {
    let s = p.to_string();
    if p.len() > 1 || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/({})", paren_if_sum(&self.num), self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(j: usize) -> MultiPoly {
        MultiPoly::var(2, j).unwrap()
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::constant(2, Scalar::int(n))
    }

    #[test]
    fn shift_binomial() {
        let p = &z(1) * &z(1);
        let s = p.shift(&[Scalar::int(2), Scalar::zero()], -1).unwrap();
        let expect = &(&p - &(&c(4) * &z(1))) + &c(4);
        assert_eq!(s, expect);
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(MultiPoly::zero(2).degree_in(1).unwrap(), Degree::NegInf);
        assert_eq!(z(2).degree_in(1).unwrap(), Degree::Finite(0));
        assert!(z(1).degree_in(3).is_err());
        assert_eq!(Degree::NegInf.minus(Degree::Finite(1)), None);
    }

    #[test]
    fn exact_division() {
        let a = &z(1) + &c(1);
        let b = &z(2) - &z(1);
        let p = &a * &b;
        assert_eq!(p.try_div_exact(&a), Some(b.clone()));
        assert_eq!((&p + &c(1)).try_div_exact(&a), None);
    }

    #[test]
    fn rational_simplifies() {
        let a = &z(1) + &c(1);
        let r = RationalFn::new(&a * &z(2), a.scale(&Scalar::int(2))).unwrap();
        assert_eq!(r.num(), &z(2).scale(&Scalar::rational(1, 2)));
        assert!(r.den().is_one());
        let r = RationalFn::new(z(1), &z(1) * &z(2)).unwrap();
        assert_eq!(r.num(), &c(1));
        assert_eq!(r.den(), &z(2));
    }

    #[test]
    fn arity_errors() {
        let a = MultiPoly::var(1, 1).unwrap();
        assert!(matches!(a.checked_add(&z(1)), Err(Error::ArityMismatch { .. })));
        assert!(RationalFn::new(z(1), MultiPoly::zero(2)).is_err());
    }

    #[test]
    fn display_round_shape() {
        let p = &(&z(1) * &z(1)).scale(&Scalar::int(3)) - &z(2);
        assert_eq!(p.to_string(), "3*z1^2 - z2");
    }
}
