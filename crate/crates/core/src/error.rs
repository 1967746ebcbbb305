//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar is not invertible in Q(i)[pi]: {0}")]
    NotInvertible(String),
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    BadIndex { index: usize, arity: usize },
    #[error("division by an expression that is identically zero")]
    DivisionByZeroExpression,
    #[error("exponent body must have polynomial coefficients")]
    NonPolynomialPhase,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable z{index} at position {pos} exceeds arity {arity}")]
    Arity { index: usize, arity: usize, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativePower { pos: usize },

    #[error("problem schema: {0}")]
    Schema(String),
    #[error("shift vector c is zero")]
    ZeroShift,
    #[error("coefficient {0} is identically zero")]
    ZeroCoefficient(String),

    #[error("xi0 = eta1*eta4 - eta2*eta3 vanishes identically")]
    SingularXi0,
    #[error("problem is classified as {actual}, not {expected}")]
    WrongCase { expected: String, actual: String },
    #[error("operator L must have constant coefficients")]
    NonConstantOperator,
    #[error("problem shape not supported by this constructor: {0}")]
    WrongShape(String),
    #[error("no exact square root in Q(i): {0}")]
    NoExactRoot(String),

    #[error("pole at evaluation point")]
    PoleAtPoint,
    #[error("candidate has a non-constant denominator")]
    NotEntireCandidate,
}
