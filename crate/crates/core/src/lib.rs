//! Exact symbolic toolkit for Fermat-type partial differential-difference
//! equations
//!
//! ```text
//! (p1 L(f) + p2 f(z+c) + p5 f)^2 + (p3 L(f) + p4 f(z+c) + p6 f)^2 = p
//! ```
//!
//! on C^n, where `L = sum q_j d/dz_j`. The crate classifies problems,
//! builds closed-form candidate solutions from a phase function `g`, and
//! decides exactly whether a candidate satisfies the equation. A seeded
//! numeric oracle and a growth-order estimator cross-check the symbolic
//! results.

pub mod error;
pub mod exppoly;
pub mod exprio;
pub mod numeric;
pub mod pdde;
pub mod polyalg;
pub mod scalars;
pub mod solvers;

pub use error::{Error, Result};
pub use exppoly::{ExpPoly, ExpTerm, LOperator, Phase, Shape, Tri};
pub use polyalg::{Degree, Monomial, MultiPoly, RationalFn};
pub use scalars::{GaussianRational, Scalar};
