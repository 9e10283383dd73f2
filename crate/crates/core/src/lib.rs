//! Numerical toolkit for the semilinear Klein-Gordon equation in de Sitter spacetime
//!
//! ```text
//! φ_tt − e^{−2t} Δφ + n φ_t + m² φ = |φ|^p
//! ```
//!
//! The substitution `φ = e^{rt} u` reduces the equation to one of three model
//! problems, depending on the sign of `n² − 4m²`. This crate provides the
//! special functions behind the explicit Fourier multipliers of those problems,
//! the multipliers themselves together with an independent ODE oracle, a
//! periodic spectral solver for the Duhamel formulation, the critical-exponent
//! and decay-rate registry, and numerical probes of the harmonic-analysis
//! inequalities used by the well-posedness arguments.

// Checks such as `!(x > 0.0)` are written to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod estimates;
pub mod inequalities;
pub mod kernels;
pub mod ode;
pub mod par;
pub mod specfun;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use transforms::{derive_params, DerivedParams, Regime};
