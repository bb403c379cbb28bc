//! Exact arithmetic: prime fields and their extensions, integer
//! polynomials, rational functions and exact determinants.

mod charpoly;
mod det;
mod field;
mod fieldpoly;
pub(crate) mod fp_poly;
mod intpoly;
pub mod prime;
mod ratfun;

pub use charpoly::{charpoly, charpoly_mod};
pub use det::{bareiss_det, interpolate, poly_matrix_det};
pub use field::{
    make_extension_field, Embedding, ExtensionField, FieldElement, FieldRef, PrimeField,
    MAX_CHARACTERISTIC,
};
pub use fieldpoly::FieldPolynomial;
pub use intpoly::IntPolynomial;
pub use ratfun::{ratfun_normalize, ratfun_series, series_log, RationalFunction};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),
    #[error("extension degree must be positive, got {0}")]
    InvalidDegree(usize),
    #[error("no monic irreducible of degree {degree} over F_{p}")]
    NoIrreducible { p: u64, degree: usize },
    #[error("modulus is not monic irreducible")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected at most {expected} coefficients, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("no embedding of a degree-{from} field into a degree-{to} field")]
    NoEmbedding { from: usize, to: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at t = 0; no expansion at origin")]
    NoExpansionAtOrigin,
}
