//! Exact scalars: arbitrary-precision rationals and finite sums of square
//! roots with rational coefficients.

mod radical;
pub(crate) mod rational;

pub use radical::{squarefree_decompose, Radical, DEFAULT_FACTOR_BOUND};
pub use rational::{format_rational, parse_rational, rat, rational_to_f64, Rational};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Field-like scalar used by [`crate::linalg::Matrix`].
///
/// Only ring operations are required; division lives on the concrete types
/// because radicals only support division by rationals.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Multiply by a rational without promoting it first.
    fn scale(&self, r: &Rational) -> Self;
    fn to_radical(&self) -> Radical;
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn to_radical(&self) -> Radical {
        Radical::from(self.clone())
    }
}

impl Scalar for Radical {
    fn from_rational(r: Rational) -> Self {
        Radical::from(r)
    }

    fn to_f64(&self) -> f64 {
        Radical::to_f64(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        self.mul_rational(r)
    }

    fn to_radical(&self) -> Radical {
        self.clone()
    }
}
