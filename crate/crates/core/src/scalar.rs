//! Scalar traits the algebra is generic over.
//!
//! Everything in this crate is exact. [`Field`] is implemented for
//! `num_rational::Ratio<T>` over any signed integer type, so the same code
//! runs on `BigRational` (the default, see [`crate::Q`]) or on
//! `Rational64` when the inputs are known to stay small. Floating-point
//! types deliberately do not implement it.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact field of characteristic zero.
pub trait Field:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + 'static
{
}

impl<T> Field for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + Display + 'static,
    Ratio<T>: FromPrimitive,
{
}

/// A Euclidean domain with a sign, i.e. a model of ℤ.
pub trait EuclideanRing:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + 'static
{
}

impl<T> EuclideanRing for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + 'static
{
}

/// Embed a machine integer. Panics only if the target type cannot hold it.
pub fn from_int<T: FromPrimitive>(n: i64) -> T {
    T::from_i64(n).expect("integer out of range for scalar type")
}

/// `base^exp` for a possibly negative exponent in a field.
pub fn field_pow<F: Field>(base: &F, exp: i64) -> F {
    let mut acc = F::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base.clone();
    }
    if exp < 0 {
        F::one() / acc
    } else {
        acc
    }
}
