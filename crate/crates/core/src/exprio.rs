//! Text input and output: the expression grammar and JSON problem files.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | 'i' | 'pi' | 'z' INT | fn '(' expr ')' | '(' expr ')'
//! fn     := 'E' | 'sin' | 'cos'
//! ```
//!
//! `E(phi)` is `e^{i phi}`, `sin(phi) = (E(phi) - E(-phi))/(2i)` and
//! `cos(phi) = (E(phi) + E(-phi))/2`. Division is only allowed by
//! expressions without exponential factors.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, LOperator};
use crate::pdde::Problem;
use crate::polyalg::MultiPoly;
use crate::scalars::{GaussianRational, Scalar};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Deepest nesting of parentheses and function calls.
pub const MAX_DEPTH: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Int(BigInt),
    I,
    Pi,
    Var(usize),
    Neg(Box<SourceExpr>),
    Add(Box<SourceExpr>, Box<SourceExpr>),
    Sub(Box<SourceExpr>, Box<SourceExpr>),
    Mul(Box<SourceExpr>, Box<SourceExpr>),
    Div(Box<SourceExpr>, Box<SourceExpr>),
    Pow(Box<SourceExpr>, u32),
    Exp(Box<SourceExpr>),
    Sin(Box<SourceExpr>),
    Cos(Box<SourceExpr>),
}

/// Parsed expression tree; `pos` is the character offset of the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceExpr {
    pub kind: SourceKind,
    pub pos: usize,
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), start));
        } else if ch.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), start));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Sym(ch), k));
            k += 1;
        } else {
            return Err(Error::Syntax { pos: k, msg: format!("unexpected character {ch:?}") });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    depth: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{c}'")))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(syntax(self.pos(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<SourceExpr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let kind = if self.eat('+') {
                SourceKind::Add
            } else if self.eat('-') {
                SourceKind::Sub
            } else {
                break;
            };
            let rhs = self.term()?;
            let pos = lhs.pos;
            lhs = SourceExpr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<SourceExpr> {
        let mut lhs = self.unary()?;
        loop {
            let kind = if self.eat('*') {
                SourceKind::Mul
            } else if self.eat('/') {
                SourceKind::Div
            } else {
                break;
            };
            let rhs = self.unary()?;
            let pos = lhs.pos;
            lhs = SourceExpr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SourceExpr> {
        let pos = self.pos();
        if self.eat('-') {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(SourceExpr { kind: SourceKind::Neg(Box::new(inner)), pos });
        }
        if self.eat('+') {
            self.enter()?;
            let inner = self.unary();
            self.depth -= 1;
            return inner;
        }
        self.power()
    }

    fn power(&mut self) -> Result<SourceExpr> {
        let base = self.atom()?;
        let pos = base.pos;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let epos = self.pos();
        match self.bump() {
            (Tok::Int(n), _) => {
                if negative {
                    return Err(Error::NegativePower { pos: epos });
                }
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| syntax(epos, format!("exponent exceeds {MAX_EXPONENT}")))?;
                Ok(SourceExpr { kind: SourceKind::Pow(Box::new(base), e), pos })
            }
            _ => Err(syntax(epos, "expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<SourceExpr> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Int(n) => SourceKind::Int(n),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                return Ok(inner);
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => SourceKind::I,
                "pi" => SourceKind::Pi,
                "E" | "sin" | "cos" => {
                    self.expect('(')?;
                    let arg = Box::new(self.expr()?);
                    self.expect(')')?;
                    match name.as_str() {
                        "E" => SourceKind::Exp(arg),
                        "sin" => SourceKind::Sin(arg),
                        _ => SourceKind::Cos(arg),
                    }
                }
                _ => match name.strip_prefix('z').filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit())) {
                    Some(d) => SourceKind::Var(d.parse().map_err(|_| syntax(pos, "variable index too large"))?),
                    None => return Err(syntax(pos, format!("unknown identifier '{name}'"))),
                },
            },
            Tok::End => return Err(syntax(pos, "unexpected end of input")),
            Tok::Sym(c) => return Err(syntax(pos, format!("unexpected '{c}'"))),
        };
        Ok(SourceExpr { kind, pos })
    }
}

/// Parses text into a syntax tree without interpreting it.
pub fn parse_source(text: &str) -> Result<SourceExpr> {
    let mut p = Parser { toks: lex(text)?, at: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Interprets a syntax tree as an `ExpPoly` in `arity` variables.
pub fn normalize(src: &SourceExpr, arity: usize) -> Result<ExpPoly> {
    use SourceKind::*;
    let c = |s: Scalar| ExpPoly::constant(arity, s);
    Ok(match &src.kind {
        Int(n) => c(GaussianRational::real(BigRational::from(n.clone())).into()),
        I => c(Scalar::i()),
        Pi => c(Scalar::pi()),
        Var(j) => {
            if *j == 0 || *j > arity {
                return Err(Error::Arity { index: *j, arity, pos: src.pos });
            }
            ExpPoly::var(arity, *j)?
        }
        Neg(a) => -normalize(a, arity)?,
        Add(a, b) => normalize(a, arity)? + normalize(b, arity)?,
        Sub(a, b) => normalize(a, arity)? - normalize(b, arity)?,
        Mul(a, b) => normalize(a, arity)? * normalize(b, arity)?,
        Div(a, b) => {
            let num = normalize(a, arity)?;
            let den = normalize(b, arity)?;
            num.checked_div(&den).map_err(|e| match e {
                Error::WrongShape(_) => syntax(b.pos, "division by an expression with exponential factors"),
                other => other,
            })?
        }
        Pow(a, e) => normalize(a, arity)?.pow(*e),
        Exp(a) => exp_of(a, arity)?,
        Sin(a) => {
            let body = normalize(a, arity)?;
            let d =
                ExpPoly::exp_i(&body).map_err(|e| at(e, a.pos))? - ExpPoly::exp_i(&-&body).map_err(|e| at(e, a.pos))?;
            d.scale_scalar(&Scalar::gaussian(0, -1).scale(&GaussianRational::real(crate::scalars::rat(1, 2))))
        }
        Cos(a) => {
            let body = normalize(a, arity)?;
            let s =
                ExpPoly::exp_i(&body).map_err(|e| at(e, a.pos))? + ExpPoly::exp_i(&-&body).map_err(|e| at(e, a.pos))?;
            s.scale_scalar(&Scalar::rational(1, 2))
        }
    })
}

fn at(e: Error, pos: usize) -> Error {
    match e {
        Error::NonPolynomialPhase => syntax(pos, "exponent body must be free of denominators"),
        other => other,
    }
}

fn exp_of(a: &SourceExpr, arity: usize) -> Result<ExpPoly> {
    ExpPoly::exp_i(&normalize(a, arity)?).map_err(|e| at(e, a.pos))
}

/// Parses and normalizes an expression in `arity` variables.
pub fn parse_expr(text: &str, arity: usize) -> Result<ExpPoly> {
    normalize(&parse_source(text)?, arity)
}

/// Canonical text of an expression; `parse_expr(&print_expr(e), n) == e`.
pub fn print_expr(e: &ExpPoly) -> String {
    e.to_string()
}

fn parse_poly(text: &str, arity: usize, field: &str) -> Result<MultiPoly> {
    parse_expr(text, arity)?.as_poly().ok_or_else(|| Error::Schema(format!("{field} must be a polynomial")))
}

fn parse_scalar(text: &str, arity: usize, field: &str) -> Result<Scalar> {
    parse_expr(text, arity)?
        .as_constant()
        .ok_or_else(|| Error::Schema(format!("{field} must be a constant in Q(i)[pi]")))
}

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

fn zero_text() -> String {
    "0".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperatorEntry {
    var: usize,
    coeff: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    p1: String,
    p2: String,
    p3: String,
    p4: String,
    #[serde(default = "zero_text")]
    p5: String,
    #[serde(default = "zero_text")]
    p6: String,
    p: String,
    c: Vec<String>,
    #[serde(rename = "L")]
    l: Vec<RawOperatorEntry>,
    #[serde(default)]
    assume_irreducible: bool,
}

/// Parses a problem from JSON text.
pub fn parse_problem(json: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    let n = raw.n;
    if n == 0 {
        return Err(Error::Schema("n must be positive".into()));
    }
    if raw.c.len() != n {
        return Err(Error::Schema(format!("c has {} entries, expected {n}", raw.c.len())));
    }
    if raw.l.is_empty() {
        return Err(Error::Schema("L must have at least one entry".into()));
    }
    let c =
        raw.c.iter().enumerate().map(|(k, s)| parse_scalar(s, n, &format!("c[{k}]"))).collect::<Result<Vec<_>>>()?;
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroShift);
    }
    let mut entries = Vec::new();
    for e in &raw.l {
        if e.var == 0 || e.var > n {
            return Err(Error::Schema(format!("operator variable {} outside 1..={n}", e.var)));
        }
        let q = parse_poly(&e.coeff, n, "L coefficient")?;
        if q.is_zero() {
            return Err(Error::ZeroCoefficient(format!("q{}", e.var)));
        }
        entries.push((e.var, q));
    }
    let l = LOperator::new(n, entries).map_err(|e| match e {
        Error::Schema(m) => Error::Schema(m),
        other => Error::Schema(other.to_string()),
    })?;
    let p = parse_poly(&raw.p, n, "p")?;
    if p.is_zero() {
        return Err(Error::ZeroCoefficient("p".into()));
    }
    Ok(Problem {
        name: raw.name,
        n,
        p1: parse_poly(&raw.p1, n, "p1")?,
        p2: parse_poly(&raw.p2, n, "p2")?,
        p3: parse_poly(&raw.p3, n, "p3")?,
        p4: parse_poly(&raw.p4, n, "p4")?,
        p5: parse_poly(&raw.p5, n, "p5")?,
        p6: parse_poly(&raw.p6, n, "p6")?,
        p,
        c,
        l,
        assume_irreducible: raw.assume_irreducible,
    })
}

/// Reads and parses a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Schema(format!("{}: {e}", path.as_ref().display())))?;
    parse_problem(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sugar_matches_exponentials() {
        let s = parse_expr("sin(z1)^2 + cos(z1)^2", 1).unwrap();
        assert_eq!(s, ExpPoly::one(1));
        let a = parse_expr("cos(3) + i*sin(3)", 1).unwrap();
        assert_eq!(a, parse_expr("E(3)", 1).unwrap());
    }

    #[test]
    fn positions_reported() {
        assert_eq!(parse_expr("z1 + * z2", 2), Err(Error::Syntax { pos: 5, msg: "unexpected '*'".into() }));
        assert!(matches!(parse_expr("E(z1", 1), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("z3", 2), Err(Error::Arity { index: 3, arity: 2, pos: 0 })));
        assert!(matches!(parse_expr("z1^-2", 1), Err(Error::NegativePower { pos: 4 })));
        assert!(matches!(parse_expr("1/E(z1)", 1), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr("1/(z1-z1)", 1), Err(Error::DivisionByZeroExpression)));
        assert!(matches!(parse_expr("E(1/z1)", 1), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn rational_constants() {
        let e = parse_expr("pi/2 - 3/4*i", 1).unwrap();
        let expect = &Scalar::pi().scale(&GaussianRational::real(crate::scalars::rat(1, 2)))
            + &Scalar::from(GaussianRational::new(crate::scalars::rat(0, 1), crate::scalars::rat(-3, 4)));
        assert_eq!(e.as_constant(), Some(expect));
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "1/(2*i)*E(z2^2) + (z1 - 1)*E(-z2^2)",
            "E(z2 + z1*E(-2*z2)) - 3/2",
            "(z1^2 + 1)/(z2 - pi)*E(pi/3 + z1) + E(3)",
            "sin(z1 + E(z2) + 1/3*pi)",
        ] {
            let a = parse_expr(text, 2).unwrap();
            let b = parse_expr(&print_expr(&a), 2).unwrap();
            assert_eq!(a, b, "{text} -> {}", print_expr(&a));
        }
    }

    #[test]
    fn problem_schema_errors() {
        let base = r#"{"n":2,"p1":"1","p2":"0","p3":"0","p4":"1","p":"1","c":["1","0"],"L":[{"var":1,"coeff":"1"}]}"#;
        assert!(parse_problem(base).is_ok());
        let zero_c = base.replace(r#"["1","0"]"#, r#"["0","0"]"#);
        assert_eq!(parse_problem(&zero_c).unwrap_err(), Error::ZeroShift);
        let zero_q = base.replace(r#""coeff":"1""#, r#""coeff":"z1-z1""#);
        assert!(matches!(parse_problem(&zero_q), Err(Error::ZeroCoefficient(_))));
        let zero_p = base.replace(r#""p":"1""#, r#""p":"0""#);
        assert!(matches!(parse_problem(&zero_p), Err(Error::ZeroCoefficient(_))));
        let short_c = base.replace(r#"["1","0"]"#, r#"["1"]"#);
        assert!(matches!(parse_problem(&short_c), Err(Error::Schema(_))));
        let bad_var = base.replace(r#""var":1"#, r#""var":3"#);
        assert!(matches!(parse_problem(&bad_var), Err(Error::Schema(_))));
        assert!(matches!(parse_problem("{"), Err(Error::Schema(_))));
    }
}
