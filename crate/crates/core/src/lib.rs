//! Dual attacks on binary linear-code decoding.
//!
//! The crate implements the double-RLPN decoder end to end together with the
//! oracles that check its analysis: exact Krawtchouk values, brute-force joint
//! weight counts, the Poisson and independence survival models, asymptotic
//! complexity exponents, and the lattice-side score model.

pub mod asymptotics;
pub mod bits;
pub mod codes;
pub mod decoder;
pub mod duality;
pub mod error;
pub mod fourier;
pub mod krawtchouk;
pub mod lattice;
pub mod math;
pub mod samples;

pub use bits::{BitMatrix, BitVec};
pub use error::{Error, Result};
