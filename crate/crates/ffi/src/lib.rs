//! C ABI over the causalab kernels.
//!
//! Every fallible function returns a [`CausalabStatus`] and writes results
//! through out-pointers. On failure the message is kept per thread and can
//! be read with [`causalab_last_error`]. Spectra and Lieb-Liniger solutions
//! are returned as opaque handles that must be released with their `_free`
//! function. Panics are caught at the boundary and reported as
//! `CAUSALAB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use causalab::boundary::{solve_spectrum, BoundarySpec, EigenMode};
use causalab::lieb_liniger::{energy_density, solve_ll, LLSolution};
use causalab::numerics::QuadratureSpec;
use causalab::relcompare::{delta_c, kernel_gap, omega_c, DispersionParams, TestFunction};
use causalab::spreading::{bump_state, free_line_grid, tail_probability, FreeLine};
use causalab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalabStatus {
    Ok = 0,
    InvalidArgument = 1,
    NonConvergence = 2,
    AssertionFailed = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    BelowNoiseFloor = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalabBoundary {
    Dirichlet = 0,
    Neumann = 1,
    Robin = 2,
    Twisted = 3,
}

/// Eigenvalues of a boundary Hamiltonian.
pub struct CausalabSpectrum {
    energies: Vec<f64>,
}

/// Lieb-Liniger ground state.
pub struct CausalabLlSolution {
    inner: LLSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> CausalabStatus {
    match e {
        Error::NonConvergence { .. }
        | Error::IterationFailed(_)
        | Error::MissedRoot { .. }
        | Error::TruncatedBasis { .. } => CausalabStatus::NonConvergence,
        Error::ResolutionInsufficient { .. } => CausalabStatus::BelowNoiseFloor,
        Error::Assertion(_) | Error::BoundaryViolation { .. } | Error::SpanViolation(_) => {
            CausalabStatus::AssertionFailed
        }
        _ => CausalabStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (CausalabStatus, String)>) -> CausalabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CausalabStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside causalab");
            CausalabStatus::Panic
        }
    }
}

fn lift<T>(r: causalab::Result<T>) -> Result<T, (CausalabStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CausalabStatus, String) {
    (CausalabStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn store<T>(out: *mut T, value: T) -> Result<(), (CausalabStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next causalab call on the same thread.
#[no_mangle]
pub extern "C" fn causalab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn causalab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Lowest `n_modes` eigenvalues of `-d^2/dx^2` on `[0, length]`.
/// `sigma0`/`sigma_l` are read for Robin walls and `theta` for twisted ones.
///
/// # Safety
/// `out` must be valid for writes. The handle written there must be freed
/// with [`causalab_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn causalab_spectrum_solve(
    boundary: CausalabBoundary,
    length: f64,
    sigma0: f64,
    sigma_l: f64,
    theta: f64,
    n_modes: usize,
    points: usize,
    out: *mut *mut CausalabSpectrum,
) -> CausalabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let bc = lift(match boundary {
            CausalabBoundary::Dirichlet => BoundarySpec::dirichlet(length),
            CausalabBoundary::Neumann => BoundarySpec::neumann(length),
            CausalabBoundary::Robin => BoundarySpec::robin(sigma0, sigma_l, length),
            CausalabBoundary::Twisted => BoundarySpec::twisted(theta, length),
        })?;
        let grid = lift(bc.grid(points))?;
        let modes = lift(solve_spectrum(&bc, &grid, n_modes))?;
        let handle = Box::new(CausalabSpectrum {
            energies: modes.iter().map(|m: &EigenMode| m.energy).collect(),
        });
        out.write(Box::into_raw(handle));
        Ok(())
    })
}

/// Number of eigenvalues held by `spectrum`, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn causalab_spectrum_len(spectrum: *const CausalabSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.energies.len())
}

/// Copy the eigenvalues into `buffer`. Fails with
/// `CAUSALAB_STATUS_BUFFER_TOO_SMALL` when `capacity` is short; `written`
/// then holds the required length.
///
/// # Safety
/// `spectrum` must be a live handle, `buffer` valid for `capacity` writes
/// and `written` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn causalab_spectrum_energies(
    spectrum: *const CausalabSpectrum,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> CausalabStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or_else(|| null("spectrum"))?;
        copy_out(&s.energies, buffer, capacity, written)
    })
}

unsafe fn copy_out(
    values: &[f64],
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> Result<(), (CausalabStatus, String)> {
    store(written, values.len())?;
    if capacity < values.len() {
        return Err((
            CausalabStatus::BufferTooSmall,
            format!("need {} slots, have {capacity}", values.len()),
        ));
    }
    if buffer.is_null() {
        return Err(null("buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    Ok(())
}

/// # Safety
/// `spectrum` must be null or a handle from [`causalab_spectrum_solve`]
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn causalab_spectrum_free(spectrum: *mut CausalabSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Solve the Lieb-Liniger equation at coupling `gamma` with `nodes`
/// Gauss-Legendre nodes (units `hbar = 2 m0 = 1`).
///
/// # Safety
/// `out` must be valid for writes. The handle must be freed with
/// [`causalab_ll_free`].
#[no_mangle]
pub unsafe extern "C" fn causalab_ll_solve(gamma: f64, nodes: usize, out: *mut *mut CausalabLlSolution) -> CausalabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let inner = lift(solve_ll(gamma, nodes))?;
        out.write(Box::into_raw(Box::new(CausalabLlSolution { inner })));
        Ok(())
    })
}

/// `f(gamma)` and the auxiliary `alpha` of a solution.
///
/// # Safety
/// `solution` must be a live handle; `f_gamma` and `alpha` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn causalab_ll_values(
    solution: *const CausalabLlSolution,
    f_gamma: *mut f64,
    alpha: *mut f64,
) -> CausalabStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        store(f_gamma, s.inner.f_gamma)?;
        store(alpha, s.inner.alpha)
    })
}

/// Density `g` at the quadrature nodes.
///
/// # Safety
/// As for [`causalab_spectrum_energies`].
#[no_mangle]
pub unsafe extern "C" fn causalab_ll_density(
    solution: *const CausalabLlSolution,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> CausalabStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        copy_out(&s.inner.g, buffer, capacity, written)
    })
}

/// # Safety
/// `solution` must be null or an unfreed handle from [`causalab_ll_solve`].
#[no_mangle]
pub unsafe extern "C" fn causalab_ll_free(solution: *mut CausalabLlSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Ground-state energy per length `rho^3 f(lambda / rho)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn causalab_ll_energy_density(lambda: f64, rho: f64, nodes: usize, out: *mut f64) -> CausalabStatus {
    guard(|| store(out, lift(energy_density(lambda, rho, nodes))?))
}

/// `omega_c(k) = sqrt(m0^2 c^4 + k^2 c^2)` and the kernel gap
/// `1/(2 m0) - c^2/(2 omega_c(k))`.
///
/// # Safety
/// `omega` and `gap` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn causalab_dispersion(k: f64, m0: f64, c: f64, omega: *mut f64, gap: *mut f64) -> CausalabStatus {
    guard(|| {
        let p = lift(DispersionParams::new(m0, c))?;
        store(omega, omega_c(k, &p))?;
        store(gap, kernel_gap(k, &p))
    })
}

/// Correlator difference between the relativistic and nonrelativistic
/// vacuum two-point functions for Gaussian test functions of widths `w1`,
/// `w2` in `dimension` dimensions.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn causalab_delta_c_gaussian(
    w1: f64,
    w2: f64,
    dimension: usize,
    tau: f64,
    m0: f64,
    c: f64,
    out: *mut f64,
) -> CausalabStatus {
    guard(|| {
        let f1 = lift(TestFunction::gaussian(w1, dimension))?;
        let f2 = lift(TestFunction::gaussian(w2, dimension))?;
        let p = lift(DispersionParams::new(m0, c))?;
        store(out, lift(delta_c(&f1, &f2, tau, &p, &QuadratureSpec::default()))?)
    })
}

/// Probability outside `[-r, r]` at time `t` for a free particle of mass
/// `mass` started in the normalized bump of radius `radius` at the origin,
/// evolved in a periodic box of length `box_length` with `points` samples.
/// Returns `CAUSALAB_STATUS_BELOW_NOISE_FLOOR` when the value cannot be told
/// apart from rounding.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn causalab_tail_probability(
    radius: f64,
    r: f64,
    t: f64,
    mass: f64,
    box_length: f64,
    points: usize,
    out: *mut f64,
) -> CausalabStatus {
    guard(|| {
        let grid = lift(free_line_grid(box_length, points))?;
        let psi = lift(bump_state(grid, 0.0, radius))?;
        let line = lift(FreeLine::new(&psi, mass))?;
        store(out, lift(tail_probability(&line, t, r))?)
    })
}
