//! Exact computations with finite root systems, cluster-algebra seeds and
//! generalized associahedra.
//!
//! The numeric core is generic over [`exactnum::Scalar`]; the aliases below
//! fix the concrete arbitrary-precision types used throughout the crate.

pub mod cartan;
pub mod coxgroup;
pub mod enumerate;
pub mod exactnum;
pub mod gassoc;
pub mod mutation;
pub mod polygon;
pub mod rootsys;
pub mod verify;
pub mod wiring;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use exactnum::ExactError;

pub type Rational = BigRational;
pub type LaurentPoly = exactnum::Laurent<BigInt>;
pub type IntMatrix = exactnum::Matrix<BigInt>;
pub type RationalMatrix = exactnum::Matrix<BigRational>;
