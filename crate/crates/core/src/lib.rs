//! Exact arithmetic for multiply monogenic orders ℤ[α] = ℤ[β].
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: integer/rational polynomials, resultants, HNF, irreducibility.
//! * [`numfield`]: arithmetic in K = ℚ[X]/(f).
//! * [`orders`]: orders as lattices, equivalence deciders, Möbius recovery.
//! * [`families`]: the two infinite families of two-times monogenic orders.
//! * [`uniteq`]: box-bounded unit equation solvers and degeneracy witnesses.
//! * [`prop61`]: the sextic classification and binomial-product identities.
//! * [`embeddings`]: certified complex conjugates, τ-tuples and ε-systems.
//! * [`cns`]: canonical number systems.

pub mod cns;
pub mod embeddings;
pub mod error;
pub mod exact;
pub mod families;
pub mod json;
pub mod numfield;
pub mod orders;
pub mod parse;
pub mod prop61;
pub mod uniteq;

pub use error::{Error, Result};
