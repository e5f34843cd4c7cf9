//! Exact linear and exterior algebra over the rationals and prime fields.
//!
//! The crate computes with points of the space of exterior powers of linear
//! maps: compound matrices, rank and small-rank invariants, orbit normal
//! forms, shape statistics for the stable prime-ideal catalog, polynomial
//! relations among minors, localization certificates and tangent-space
//! dimensions. Everything is exact; there is no floating point anywhere.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `exteria-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod comb;
mod error;
pub mod exterior;
pub mod invariants;
pub mod linalg;
pub mod localize;
pub mod matrix;
pub mod poly;
pub mod relations;
pub mod scalar;
pub mod shapes;
pub mod tangent;

pub use comb::{binomial, combinations, Combination};
pub use error::{Error, Result};
pub use exterior::{DecomposableSpec, ExteriorPoint, Multivector};

pub use matrix::DenseMatrix;
pub use scalar::ExactScalar;
