//! Exact truncated power series and Puiseux series over arbitrary-precision
//! rationals.
//!
//! Every series carries its truncation order explicitly. Binary operations
//! produce a result whose order is the minimum of the input orders; a few
//! operations (valuation cancelling division, derivatives of Puiseux series
//! with offset zero) lose more and say so in their docs.

mod puiseux;
mod qseries;

pub use puiseux::PuiseuxSeries;
pub use qseries::QSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// The coefficient field for all exact computation.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series of valuation {divisor} when the dividend has valuation {dividend}")]
    DivisionByNonUnit { divisor: usize, dividend: usize },
    #[error("division by a series that is zero to its order")]
    DivisionByZero,
    #[error("base series must have constant term exactly 1")]
    NonUnitBase,
    #[error("exponential needs a series with zero constant term")]
    NonzeroExpConstant,
    #[error("inner series of a composition must have zero constant term")]
    NonvanishingInnerConstant,
    #[error("offsets {0} and {1} do not differ by an integer")]
    IncompatibleOffsets(Rational, Rational),
    #[error("offset {0} is not a nonnegative integer")]
    NonIntegralOffset(Rational),
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// `Some(k)` when `x` is an integer representable as `i64`.
pub fn as_integer(x: &Rational) -> Option<i64> {
    if x.denom().is_one() {
        i64::try_from(x.numer()).ok()
    } else {
        None
    }
}
