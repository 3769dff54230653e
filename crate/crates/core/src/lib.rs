//! Implicit Newton polygons of parametric plane curves.
//!
//! Given a plane curve in polynomial or rational parametric form with fixed
//! supports, this crate computes the Newton polygon of its implicit equation
//! three independent ways:
//!
//! * [`predictor`] — closed-form vertex formulas, one per parameterization
//!   class (polynomial, shared denominator, different denominators);
//! * [`subdivisions`] — exhaustive Cayley staircase enumeration and
//!   lifting-induced mixed subdivisions, from which exponent vectors are read;
//! * [`oracle`] — exact-rational implicitization (interpolation kernel and
//!   Sylvester resultant), giving the true polygon for concrete coefficients.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod curves;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod predictor;
pub mod subdivisions;

pub use error::Error;
pub use geometry::{LatticePoint, LatticePolygon, MonotoneChain};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;
/// Exact integer scalar used throughout the crate.
pub type Integer = num_bigint::BigInt;

pub(crate) fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}
