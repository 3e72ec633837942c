use num_complex::Complex64;

use super::grid::{weighted_inner, WaveFunction};
use super::spectrum::{boundary_condition_residual, BoundarySpec};
use crate::{Error, Result};

/// Boundary conditions must hold to this accuracy before fluxes are classified.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;
/// Flux magnitudes below this are treated as zero.
pub const FLUX_TOLERANCE: f64 = 1e-8;

/// `<phi, p psi> - <p phi, psi>` with `p = -i d/dx`, by quadrature.
pub fn momentum_symmetry_defect(phi: &WaveFunction, psi: &WaveFunction) -> Result<Complex64> {
    if !phi.grid().same_as(psi.grid()) {
        return Err(Error::GridMismatch);
    }
    let w = phi.grid().weights();
    let dphi = phi.derivative();
    let dpsi = psi.derivative();
    let i = Complex64::new(0.0, 1.0);
    // <phi, -i psi'> - <-i phi', psi> = -i (<phi, psi'> + <phi', psi>)
    Ok(-i * (weighted_inner(&w, phi.values(), &dpsi) + weighted_inner(&w, &dphi, psi.values())))
}

/// `-i [conj(phi) psi]_0^L`, the value the symmetry defect must equal.
pub fn boundary_term(phi: &WaveFunction, psi: &WaveFunction) -> Result<Complex64> {
    if !phi.grid().same_as(psi.grid()) {
        return Err(Error::GridMismatch);
    }
    let a = phi.boundary_data();
    let b = psi.boundary_data();
    let i = Complex64::new(0.0, 1.0);
    Ok(-i * (a.value_end.conj() * b.value_end - a.value_start.conj() * b.value_start))
}

fn current_from(value: Complex64, slope: Complex64) -> Result<f64> {
    let i = Complex64::new(0.0, 1.0);
    let j = i * (slope.conj() * value - value.conj() * slope);
    if j.im.abs() >= 1e-12 * j.re.abs().max(1.0) {
        return Err(Error::Assertion(format!("current has imaginary part {}", j.im)));
    }
    Ok(j.re)
}

/// `j(x) = i (conj(psi') psi - conj(psi) psi')` at a grid point `x`. On
/// periodic grids `x` may also be the far end of the domain.
pub fn probability_current(psi: &WaveFunction, x: f64) -> Result<f64> {
    let grid = psi.grid();
    if let Some(i) = grid.index_of(x) {
        let d = psi.derivative();
        return current_from(psi.values()[i], d[i]);
    }
    if grid.is_periodic() && (x - grid.end()).abs() <= 1e-9 * grid.spacing() {
        let b = psi.boundary_data();
        return current_from(b.value_end, b.slope_end);
    }
    Err(Error::OutOfDomain(x))
}

/// Current profile on every grid point.
pub fn current_profile(psi: &WaveFunction) -> Result<Vec<f64>> {
    let d = psi.derivative();
    psi.values().iter().zip(&d).map(|(v, s)| current_from(*v, *s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FluxClass {
    /// No flux through either wall.
    Isolated,
    /// What enters at one end leaves at the other.
    Throughflow,
    /// Neither of the above.
    Unbalanced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    pub j0: f64,
    pub jl: f64,
    pub classification: FluxClass,
}

/// How well `psi` satisfies `bc`; 0 is exact.
pub fn boundary_residual(bc: &BoundarySpec, psi: &WaveFunction) -> Result<f64> {
    if (psi.grid().length - bc.length).abs() > 1e-12 * bc.length {
        return Err(Error::GridMismatch);
    }
    Ok(boundary_condition_residual(&bc.kind, psi))
}

/// Currents at both walls and whether the system is isolated.
pub fn flux_report(bc: &BoundarySpec, psi: &WaveFunction) -> Result<FluxReport> {
    let residual = boundary_residual(bc, psi)?;
    if !(residual <= BOUNDARY_TOLERANCE) {
        return Err(Error::BoundaryViolation {
            residual,
            tolerance: BOUNDARY_TOLERANCE,
        });
    }
    let b = psi.boundary_data();
    let j0 = current_from(b.value_start, b.slope_start)?;
    let jl = current_from(b.value_end, b.slope_end)?;
    let classification = if j0.abs() < FLUX_TOLERANCE && jl.abs() < FLUX_TOLERANCE {
        FluxClass::Isolated
    } else if (j0 - jl).abs() < FLUX_TOLERANCE {
        FluxClass::Throughflow
    } else {
        FluxClass::Unbalanced
    };
    Ok(FluxReport { j0, jl, classification })
}
