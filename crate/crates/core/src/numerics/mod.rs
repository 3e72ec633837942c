//! Shared numerical kernels.
//!
//! Everything here is pure and reentrant; callers may fan work out across
//! threads freely. All arithmetic is `f64`.

mod expm;
mod fourier;
mod legendre;
mod quadrature;
mod roots;

pub use expm::{matrix_exponential, CMatrix};
pub use fourier::{fft_frequencies, Fft};
pub use legendre::gauss_legendre;
pub use quadrature::{integrate_1d, integrate_radial_3d, Integral, Interval, QuadratureSpec};
pub use roots::{brent, find_roots, Bracket, RootScan};
