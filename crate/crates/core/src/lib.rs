//! Simulation and classical post-processing for wire-cut linear-cluster circuits.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature fans job execution and witness-term
//! evaluation out over rayon; results are bit-identical with or without it.
//!
//! Qubit 0 is the leftmost qubit of a chain and the most significant bit of
//! every basis-state index and printed bitstring.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod circuit;
pub mod cut;
mod error;
pub mod mitigation;
pub mod qstate;
pub mod reconstruct;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};

/// Global numerical tolerances.
pub mod tol {
    /// Hermiticity, trace and eigenvalue-floor checks on density operators.
    pub const STRUCTURAL: f64 = 1e-10;
    /// Normalisation of probability and quasi-probability vectors.
    pub const PROBABILISTIC: f64 = 1e-9;
    /// Pure-math identities (state-vector norms, cut reconstruction).
    pub const EXACT: f64 = 1e-12;
}
