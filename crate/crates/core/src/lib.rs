//! Hilbert functions of standard graded artinian type-2 level algebras.
//!
//! Everything is exact: binomial arithmetic in arbitrary precision and linear
//! algebra over the rationals by fraction-free elimination.

pub mod betti;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod hvec;
pub mod ideal;
pub mod invsys;
pub mod level2;
pub mod linalg;
pub mod macaulay;

pub use error::{Error, Result};
pub use macaulay::HVector;
