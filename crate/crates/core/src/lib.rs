//! Exact operator calculus for divided-power Lie superalgebras acting on
//! symmetric powers of curves and on Jacobians.
//!
//! Everything is generic over an exact coefficient type ([`Scalar`]); the
//! aliases below fix the two supported choices.

pub mod combinat;
pub mod env;
pub mod jaccalc;
pub mod liealg;
pub mod models;
pub mod poly;
pub mod report;
pub mod ring;
pub mod ringspec;
pub mod scalar;
pub mod suites;

pub use scalar::{Scalar, ScalarMode};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub type IntRing = ring::Ring<Int>;
pub type RatRing = ring::Ring<Rat>;
pub type IntPoly = poly::Poly<Int>;
pub type RatPoly = poly::Poly<Rat>;
pub type IntLie = liealg::LieElem<Int>;
pub type RatLie = liealg::LieElem<Rat>;
