//! Arbitrary-precision polynomial and integer-matrix primitives.

pub mod irreducible;
pub mod matrix;
pub mod poly;
pub mod resultant;
pub mod stability;

pub use irreducible::is_irreducible_q;
pub use matrix::IntMatrix;
pub use poly::{IntPoly, Poly, RatPoly};
pub use resultant::{discriminant, resultant};
