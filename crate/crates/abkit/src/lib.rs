//! Numerics for the 4D Aharonov-Bohm operator
//! L_A = (i∇ + A)², A(x) = α(−x₂, x₁, 0, 0)/(x₁² + x₂²).
//!
//! Closed-form propagator and heat kernels, the spectral measure of √L_A, a
//! partial-wave evolution engine with a split-step NLS solver, and the scans
//! that check dispersive, Strichartz, virial and decay estimates.

pub mod cli;
pub mod error;
pub mod estimates;
pub mod evolve;
pub mod geometry;
pub mod kernel;
pub mod pool;
pub mod report;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
