//! Exact polynomial arithmetic over the rationals.
//!
//! [`MultiPoly`] is a sparse multivariate polynomial keyed by [`Monomial`]
//! (graded-lexicographic order); [`UniPoly`] is a dense univariate
//! polynomial used where a single variable remains.

mod gcd;
mod monomial;
mod multi;
mod rational;
mod uni;

pub use gcd::gcd_multi;
pub use monomial::Monomial;
pub use multi::MultiPoly;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use uni::UniPoly;

use thiserror::Error;

/// Degree of a polynomial. The zero polynomial has degree [`Degree::NegInf`].
///
/// Variant order makes `NegInf` compare below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `true` for a finite degree greater than zero.
    pub fn is_positive(self) -> bool {
        matches!(self, Degree::Finite(d) if d > 0)
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {dim} variables")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    NotDivisible,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
}
