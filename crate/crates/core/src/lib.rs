//! Desk-scale numerical laboratory for two questions about nonrelativistic
//! quantum mechanics: what it means to confine a particle with boundary
//! conditions on an interval, and how fast a compactly supported state
//! spreads under free evolution. A second half compares free relativistic
//! and nonrelativistic fields in the limit `c -> inf`.
//!
//! Modules, bottom-up:
//!
//! - [`numerics`]: adaptive quadrature, bracketed root finding, matrix
//!   exponential, FFT helpers.
//! - [`boundary`]: spectra of `-d^2/dx^2` on `[0, L]` under Robin, Dirichlet
//!   and twisted boundary conditions, momentum symmetry defects and
//!   probability currents.
//! - [`spreading`]: free and confined time evolution, localization
//!   probabilities and the confined/spreading classification.
//! - [`fock`]: truncated Fock space, smeared fields, Weyl relations.
//! - [`relcompare`]: relativistic dispersion, kernel comparison and the
//!   correlator bound as `c -> inf`.
//! - [`lieb_liniger`]: ground state of the delta-Bose gas by Nyström.
//! - [`cli`]: JSON-configured batch front end writing CSV, JSON and SVG.
//!
//! Units: `hbar = 1` everywhere. On the interval `H = -d^2/dx^2` (i.e. `2m = 1`).

pub mod boundary;
pub mod cli;
mod error;
pub mod fock;
pub mod lieb_liniger;
pub mod numerics;
pub mod relcompare;
pub mod spreading;

pub use error::{Error, Result};
pub use num_complex::Complex64;
