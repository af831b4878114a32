//! Rational points of bounded height on elliptic curves over ℚ with a
//! rational 2-torsion point.
//!
//! The crate pairs exact point counting (enumeration, canonical heights,
//! lattice counting) with the explicit inequality chain that bounds
//! `N(B) = #{P ∈ E(ℚ) : H(P) ≤ B}` by `B^{C / log log B}`, and reports how
//! the two sides compare on concrete curves.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod count;
pub mod curve;
pub mod error;
pub mod points;
mod serde_big;

pub use error::{Error, Result};
