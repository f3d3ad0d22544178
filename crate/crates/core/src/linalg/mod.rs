//! Exact arithmetic: big rationals, dense univariate polynomials, the
//! `P_{n,i}` interpolation basis and fraction-free nullspaces.
//!
//! Rationals are [`num_rational::BigRational`], which keeps numerator and
//! denominator coprime with a positive denominator after every operation.

mod basis;
mod matrix;
mod poly;

pub use basis::{
    basis_combination, basis_poly, binomial, binomial_poly, degree_drop_equations, degree_drop_equations_alt, from_basis, in_basis,
    render_in_basis,
};
pub use matrix::{nullspace, primitive_normalize, RatMatrix};
pub use poly::RatPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("basis index {i} outside [0,{n}]")]
    IndexOutOfRange { n: usize, i: usize },
    #[error("polynomial of degree {degree} exceeds the basis bound {n}")]
    DegreeTooLarge { degree: usize, n: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("entry {index} is zero, so the sign is ambiguous")]
    AmbiguousSign { index: usize },
    #[error("rows have unequal lengths")]
    Ragged,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or `p` when `q = 1`.
pub fn render_rational(x: &Rational) -> String {
    x.to_string()
}
