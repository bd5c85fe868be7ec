//! Exact, desk-scale verification of the transformation from relaxed
//! locally decodable codes with low soundness error to standard LDCs.
//!
//! Every probability is an exact rational. Worst cases are found by full
//! enumeration of Hamming balls.

pub mod bounds;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod files;
pub mod fixtures;
pub mod rational;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
