//! Particle on `[0, L]` with `H = -d^2/dx^2` under Robin, Dirichlet or
//! twisted boundary conditions.
//!
//! Robin and Dirichlet walls confine with zero flux at both ends, but the
//! momentum `-i d/dx` is not self-adjoint there: its symmetry defect is the
//! boundary term `-i [conj(phi) psi]_0^L`. Twisted conditions admit a
//! self-adjoint momentum whose square is the Hamiltonian, at the price of
//! matching currents at the two ends rather than vanishing ones.

mod current;
mod grid;
mod spectrum;

pub use current::{
    boundary_residual, boundary_term, current_profile, flux_report, momentum_symmetry_defect, probability_current,
    FluxClass, FluxReport, BOUNDARY_TOLERANCE, FLUX_TOLERANCE,
};
pub use grid::{BoundaryData, GridKind, GridSpec, WaveFunction, MIN_POINTS};
pub use spectrum::{
    dirichlet_ground_twisted_coefficient, dirichlet_ground_twisted_moments, momentum_spectrum_twisted,
    robin_count_below, robin_residual, solve_spectrum, BoundaryKind, BoundarySpec, EigenMode,
    SpectralDecomposition,
};
