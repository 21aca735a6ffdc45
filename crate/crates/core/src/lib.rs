//! Bargmann invariants of pure-state tuples.
//!
//! The crate evaluates cyclic overlap products `⟨ψ₁|ψ₂⟩⟨ψ₂|ψ₃⟩⋯⟨ψₙ|ψ₁⟩`,
//! decides membership in the set of invariants reachable with circulant Gram
//! matrices (both through the closed-form regular polygon and through an
//! independent eigenvalue feasibility search), and builds explicit qubit
//! tuples that realize any reachable value.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, PSD factoring.
//! - [`states`]: pure states, tuples, overlaps, Haar sampling.
//! - [`gram`]: Gram matrices, realization, Hadamard products, associated circulants.
//! - [`circulant`]: circulant specs, DFT eigenvalues, LP feasibility, edge witnesses.
//! - [`regions`]: polygon geometry, power-map membership, boundary curves.
//! - [`synth`]: constructive qubit realizations.
//! - [`harness`]: seeded Monte Carlo property suites.
//! - [`io`]: JSON wire formats.

#![forbid(unsafe_code)]

pub mod circulant;
pub mod error;
pub mod gram;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod regions;
pub mod roots;
pub mod states;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default PSD tolerance, relative to the largest eigenvalue magnitude.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Maximum entrywise deviation from Hermitian symmetry accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Normalization slack for pure states.
pub const NORM_TOL: f64 = 1e-10;

/// Width of the band around a polygon edge inside which membership verdicts
/// are flagged as boundary cases.
pub const BOUNDARY_BAND: f64 = 1e-7;
