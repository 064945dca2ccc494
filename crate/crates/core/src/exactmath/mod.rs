//! Exact scalars: big rationals, sparse multivariate polynomials over them, and
//! rational functions with factored denominators.
//!
//! Everything downstream is checked by structural equality of canonical forms,
//! so no tolerance appears anywhere in the crate.

mod poly;
mod ratfunc;
pub(crate) mod text;
mod var;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use text::{parse_poly, parse_ratfunc, parse_rational, ParseError};
pub use var::Var;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("variable `{0}` has no assigned value")]
    MissingVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` is not a polynomial")]
    NotPolynomial(String),
}

/// Commutative ring of coefficients used for algebra elements and operator matrices.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` when `rhs` is zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
}

impl Ring for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Field for Rational {
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (!<Rational as Zero>::is_zero(rhs)).then(|| self / rhs)
    }
}

/// Integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Text form of a rational: `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
