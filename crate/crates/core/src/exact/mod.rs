//! Exact arithmetic over Q and Q(w): rationals, polynomials, rational
//! functions and dense matrices with canonical row reduction.

mod matrix;
mod poly;
mod ratfunc;
mod rational;

pub use matrix::{poly_det, Matrix, Rref};
pub use poly::{poly_gcd, rational_roots, Poly, RootDecomposition};
pub use ratfunc::{Field, RationalFunction};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("the zero polynomial has no root decomposition")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
}
