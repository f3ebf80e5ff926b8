//! Exact symbolic verification of GKLO representations of shifted Yangians.
//!
//! The crate builds the images of the Yangian generators in an algebra of
//! h-difference operators, checks the defining relations to a chosen
//! truncation order, and compares the classical limit with the Poisson
//! bracket of generalized minors on loop groups.

pub mod cartan;
pub mod diffop;
pub mod error;
pub mod gklo;
pub mod minors;
pub mod poly;
pub mod scenario;
pub mod series;

pub use error::{Error, Result};
