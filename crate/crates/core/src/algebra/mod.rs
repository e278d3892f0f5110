//! Exact arithmetic over the rationals: polynomials in one and several
//! variables, normalized rational functions, and the factorization-level
//! routines the variational analysis is built on.

mod factor;
mod linalg;
mod mpoly;
mod poly;
mod ratfun;
mod resultant;
mod roots;

pub use factor::{
    extended_gcd, gcd, gcd_monic, logderiv_split, partial_fractions, squarefree_factorization,
    LogDerivSplit, PartialFractionTerm, PartialFractions, SquarefreeFactorization, Unsupported,
};
pub use linalg::{determinant, solve_linear, LinearSolution};
pub use mpoly::{MPoly, Poly2, Poly4, Var};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use resultant::{resultant, resultant_with_parameter};
pub use roots::{rational_roots, real_root_count};

use num_bigint::BigInt;
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `num / den` as a [`Rational`].
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
}
