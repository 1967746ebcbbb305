//! Exact scalars: Gaussian rationals and polynomials in pi over them.
//!
//! `Scalar` is the ring Q(i)[pi]. Pi is treated as transcendental, so an
//! element is a finite list of Gaussian-rational coefficients indexed by the
//! power of pi.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `n / d` as a big rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// `re + im*i` with both parts kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(rat(re, 1), rat(im, 1))
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational::new(re, BigRational::zero())
    }

    pub fn zero() -> Self {
        GaussianRational::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussianRational::from_ints(1, 0),
            1 => GaussianRational::from_ints(0, 1),
            2 => GaussianRational::from_ints(-1, 0),
            _ => GaussianRational::from_ints(0, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let n = self.norm_sqr();
        Ok(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Exact square root in Q(i), if one exists. Returns the root with
    /// non-negative real part (and non-negative imaginary part when the real
    /// part vanishes).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = rat(2, 1);
        let u = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let v = rational_sqrt(&((&modulus - &self.re) / &two))?;
        let v = if self.im.is_negative() { -v } else { v };
        let root = GaussianRational::new(u, v);
        debug_assert_eq!(&root * &root, *self);
        Some(root)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Prints a form the expression parser reads back: `3`, `-1/2`, `i`,
    /// `2/3*i`, `(1 - i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(im))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", im_part(&self.im))
        } else if self.im.is_negative() {
            write!(f, "({} - {})", fmt_rational(&self.re), im_part(&-self.im.clone()))
        } else {
            write!(f, "({} + {})", fmt_rational(&self.re), im_part(&self.im))
        }
    }
}

// ---------------------------------------------------------------------------
// Q(i)[pi]
// ---------------------------------------------------------------------------

/// Element of Q(i)[pi]; `coeffs[m]` multiplies `pi^m`. No trailing zeros, so
/// zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    coeffs: Vec<GaussianRational>,
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<GaussianRational> for Scalar {
    fn from(g: GaussianRational) -> Self {
        Scalar::from_coeffs(vec![g])
    }
}

impl Scalar {
    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Scalar { coeffs }
    }

    pub fn zero() -> Self {
        Scalar { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        GaussianRational::one().into()
    }

    pub fn i() -> Self {
        GaussianRational::i().into()
    }

    pub fn pi() -> Self {
        Scalar::from_coeffs(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn int(n: i64) -> Self {
        GaussianRational::from_ints(n, 0).into()
    }

    pub fn rational(n: i64, d: i64) -> Self {
        GaussianRational::real(rat(n, d)).into()
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        GaussianRational::from_ints(re, im).into()
    }

    /// `i^k`.
    pub fn unit(k: i64) -> Self {
        GaussianRational::i_pow(k).into()
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `pi^m`.
    pub fn coeff(&self, m: usize) -> GaussianRational {
        self.coeffs.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in pi; `None` for zero.
    pub fn pi_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The Gaussian rational if this scalar does not involve pi.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self.coeffs.len() {
            0 => Some(GaussianRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Coefficient of the highest power of pi.
    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn conj(&self) -> Self {
        Scalar::from_coeffs(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, g: &GaussianRational) -> Self {
        Scalar::from_coeffs(self.coeffs.iter().map(|c| c * g).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; only degree-0 nonzero scalars are units.
    pub fn invert(&self) -> Result<Self> {
        match self.coeffs.len() {
            1 => Ok(self.coeffs[0].inv()?.into()),
            _ => Err(Error::NotInvertible(self.to_string())),
        }
    }

    /// Exact quotient `self / d` in Q(i)[pi], if `d` divides `self`.
    pub fn try_div(&self, d: &Scalar) -> Option<Scalar> {
        let lead_inv = d.leading()?.inv().ok()?;
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &lead_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&q * dc);
                }
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Scalar::from_coeffs(quot))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let pi = Complex64::new(std::f64::consts::PI, 0.0);
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * pi + c.to_complex())
    }

    /// If `theta = q*pi` with `q` a real multiple of 1/2, the unit `e^{i theta}`
    /// as a power `k` of `i`.
    pub fn fold_unit_phase(&self) -> Option<i64> {
        if self.coeffs.len() > 2 || !self.coeff(0).is_zero() {
            return None;
        }
        let q = self.coeff(1);
        if !q.is_real() {
            return None;
        }
        let twice = &q.re * rat(2, 1);
        if !twice.is_integer() {
            return None;
        }
        Some(twice.to_integer().mod_floor(&BigInt::from(4)).to_i64().unwrap())
    }

    /// Splits `theta` into a quarter-turn `i^k` and a canonical remainder:
    /// the real part of the pi-coefficient of the remainder lies in `[0, 1/2)`,
    /// all other components are untouched. `e^{i theta} = i^k e^{i rest}`.
    pub fn split_unit_phase(&self) -> (i64, Scalar) {
        let q = self.coeff(1);
        let twice = &q.re * rat(2, 1);
        let k = twice.floor().to_integer();
        if k.is_zero() {
            return (0, self.clone());
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[1] = GaussianRational::new(&q.re - BigRational::from(k.clone()) / rat(2, 1), q.im);
        let unit = k.mod_floor(&BigInt::from(4)).to_i64().unwrap();
        (unit, Scalar::from_coeffs(coeffs))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        Scalar::from_coeffs((0..n).map(|m| &self.coeff(m) + &o.coeff(m)).collect())
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        Scalar::from_coeffs((0..n).map(|m| &self.coeff(m) - &o.coeff(m)).collect())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                out[a + b] = &out[a + b] + &(x * y);
            }
        }
        Scalar::from_coeffs(out)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(Scalar, Add add, Sub sub, Mul mul);
forward_owned!(GaussianRational, Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                let pi = match m {
                    0 => return c.to_string(),
                    1 => "pi".to_string(),
                    _ => format!("pi^{m}"),
                };
                if c.is_one() {
                    pi
                } else if (-c).is_one() {
                    format!("-{pi}")
                } else {
                    format!("{c}*{pi}")
                }
            })
            .collect();
        match parts.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", parts[0]),
            _ => write!(f, "({})", parts.join(" + ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_quarter_turns() {
        let half_pi = &Scalar::rational(1, 2) * &Scalar::pi();
        assert_eq!(half_pi.fold_unit_phase(), Some(1));
        assert_eq!(Scalar::pi().fold_unit_phase(), Some(2));
        assert_eq!((&Scalar::rational(-1, 2) * &Scalar::pi()).fold_unit_phase(), Some(3));
        assert_eq!((&Scalar::int(2) * &Scalar::pi()).fold_unit_phase(), Some(0));
        assert_eq!((&Scalar::rational(1, 3) * &Scalar::pi()).fold_unit_phase(), None);
        assert_eq!(Scalar::int(3).fold_unit_phase(), None);
        assert_eq!(Scalar::zero().fold_unit_phase(), Some(0));
    }

    #[test]
    fn split_keeps_quarter_remainder() {
        let theta = &Scalar::rational(2, 3) * &Scalar::pi();
        let (k, rest) = theta.split_unit_phase();
        assert_eq!(k, 1);
        assert_eq!(rest, &Scalar::rational(1, 6) * &Scalar::pi());
        let theta = &(&Scalar::rational(-1, 4) * &Scalar::pi()) + &Scalar::int(3);
        let (k, rest) = theta.split_unit_phase();
        assert_eq!(k, 3);
        assert_eq!(rest, &(&Scalar::rational(1, 4) * &Scalar::pi()) + &Scalar::int(3));
    }

    #[test]
    fn invert_requires_pi_free() {
        assert!(Scalar::pi().invert().is_err());
        assert!(Scalar::zero().invert().is_err());
        let s = Scalar::gaussian(1, 1);
        assert!((&s * &s.invert().unwrap()).is_one());
    }

    #[test]
    fn exact_division_in_pi() {
        let a = &Scalar::pi() + &Scalar::int(1);
        let b = &a * &Scalar::pi();
        assert_eq!(b.try_div(&a), Some(Scalar::pi()));
        assert_eq!(a.try_div(&Scalar::pi()), None);
    }

    #[test]
    fn gaussian_sqrt() {
        let w = GaussianRational::from_ints(0, 2);
        assert_eq!(w.sqrt(), Some(GaussianRational::from_ints(1, 1)));
        assert_eq!(GaussianRational::from_ints(2, 0).sqrt(), None);
        let w = GaussianRational::from_ints(-9, 0);
        assert_eq!(w.sqrt(), Some(GaussianRational::from_ints(0, 3)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::gaussian(1, -1).to_string(), "(1 - i)");
        assert_eq!(Scalar::rational(-1, 2).to_string(), "-1/2");
        let s = &(&Scalar::pi() * &Scalar::pi()) + &Scalar::i();
        assert_eq!(s.to_string(), "(pi^2 + i)");
    }
}
