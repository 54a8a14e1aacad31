//! Pulse synthesis and dynamics for two-mode photon states driven through
//! qubit sideband transitions.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod couplings;
pub mod error;
pub mod evolve;
pub mod fock;
pub mod linalg;
pub mod report;
pub mod synth;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
