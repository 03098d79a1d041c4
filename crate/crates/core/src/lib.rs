//! Numerics for the zitterbewegung interpretation of the free and driven
//! Dirac electron: spinor algebra, bilinear observables, zitter worldlines,
//! and classical dynamics in external fields.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops read like the tensor index notation they implement
#![allow(clippy::needless_range_loop)]

pub mod dirac;
pub mod dynamics;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod fieldmap;
pub mod minkowski;
pub mod observables;
pub mod plot;
pub mod scenario;
pub mod simulate;
pub mod tensor;
pub mod units;
pub mod verify;
pub mod wavefunction;
pub mod worldline;

pub use error::{Error, Result};

#[cfg(test)]
mod properties;
