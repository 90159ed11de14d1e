//! Scalar abstraction shared by the coordination-space math.
//!
//! Rectangle-model planning only needs ring operations, division and
//! ordering, so the planners run unchanged on `f32`, `f64` and exact
//! rationals. Anything that needs a square root (disc cross-sections,
//! path geometry) asks for [`num_traits::Float`] on top.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + Copy + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Slack used when two computed quantities should be equal.
    /// Zero for exact types.
    fn tolerance() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `a <= b` up to [`Scalar::tolerance`].
    fn le_tol(a: Self, b: Self) -> bool {
        a <= b + Self::tolerance()
    }

    fn approx_eq(a: Self, b: Self) -> bool {
        Self::le_tol(a, b) && Self::le_tol(b, a)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-6
    }
}

impl Scalar for Rational64 {
    fn tolerance() -> Self {
        Rational64::from_integer(0)
    }
}

/// Shorthand for exact rational literals in tests and examples.
pub fn ratio(numer: i64, denom: i64) -> Rational64 {
    Rational64::new(numer, denom)
}
