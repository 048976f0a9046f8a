//! Numerics for the largest bulk gaps of GUE, LUE and JUE spectra.
//!
//! The crate is `no_std` with `alloc`. Transcendental functions go through
//! `libm`, so results are identical with and without the `std` feature.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(any(feature = "std", test))]
extern crate std;

pub mod detengine;
pub mod ensembles;
pub mod equilibrium;
pub mod error;
pub mod gapstats;
pub mod jet;
pub mod limitlaws;
pub mod linalg;
pub mod math;
pub mod opkernels;
pub mod quadrature;

pub use equilibrium::{EnsembleKind, EnsembleSpec, IntervalUnion, MinimizerReport};
pub use error::{Error, Result};
