//! Exact scalar and symbolic algebra: rationals, polynomials, Möbius maps and
//! rational functions. Nothing in this crate uses floating point.

mod mobius;
mod polynomial;
mod ratfun;
mod rational;

pub use mobius::MobiusMap;
pub use polynomial::Polynomial;
pub use ratfun::RationalFunction;
pub use rational::{q, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {at}")]
    Pole { at: Rational },
    #[error("degenerate Möbius map (ad - bc = 0)")]
    DegenerateMap,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse {0:?} as a rational (expected \"p\" or \"p/q\")")]
    Parse(String),
}
