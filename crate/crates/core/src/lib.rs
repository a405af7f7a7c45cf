//! C-functions and biunimodular functions on cyclic groups.
//!
//! The crate provides exact Gauss and Jacobi sums in cyclotomic integer rings,
//! the orbit combinatorics of exponent pairs, transversality tests for
//! equivariant Clifford tori, and a homotopy-continuation solver that counts
//! odd C-functions with multiplicities.

pub mod acceptance;
pub mod arith;
pub mod config;
pub mod cyclotomic;
pub mod error;
pub mod geometry;
pub mod group_fourier;
pub mod orbit;
pub mod solver;

pub use error::{Error, Result};
