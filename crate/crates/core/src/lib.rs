//! Exact lattice bookkeeping for symplectic divisors: blowup moves,
//! exceptional classes, reductions, cusp resolutions and Kähler inflation plans.

pub mod checks;
pub mod cusp;
pub mod divisor;
pub mod document;
pub mod dot;
pub mod error;
pub mod exceptional;
pub mod inflation;
pub mod lattice;
pub mod moves;
pub mod reduction;

pub use error::{Error, Result};
