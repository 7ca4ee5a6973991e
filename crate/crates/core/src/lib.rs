//! Exact homological algebra for strictly semistable degenerations and
//! exact special values of function-field L-functions.
//!
//! The algebra is generic over the scalar: [`Field`] for the ℚ-linear parts
//! and [`EuclideanRing`] for the ℤ-structures. The aliases below fix the
//! arbitrary-precision instances used by the command-line workbench.

pub mod complex;
pub mod deligne;
pub mod lfun;
pub mod linalg;
pub mod scalar;
pub mod strata;

pub use scalar::{EuclideanRing, Field};

/// Arbitrary-precision integers.
pub type Z = num_bigint::BigInt;
/// Arbitrary-precision rationals.
pub type Q = num_rational::BigRational;

pub type RatMatrix = linalg::Matrix<Q>;
pub type IntMatrix = linalg::Matrix<Z>;
pub type SmithForm = linalg::SmithForm<Z>;
pub type FPAbelianGroup = linalg::FPAbelianGroup<Z>;
pub type AbMap = linalg::AbMap<Z>;
pub type GroupOrder = linalg::GroupOrder<Z>;
pub type RatPoly = lfun::Poly<Q>;
pub type RatFunc = lfun::RatFunc<Q>;
pub type PlaceDatum = lfun::PlaceDatum<Q>;
pub type CompletedL = lfun::CompletedL<Q>;
pub type LeadingValue = lfun::LeadingValue<Q>;
pub type FibreDescriptor = strata::FibreDescriptor<Q>;
pub type DeligneGroup = deligne::DeligneGroup<Q>;
