use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{GridKind, GridSpec, WaveFunction};
use crate::numerics::{find_roots, RootScan};
use crate::{Error, Result};

/// Self-adjoint realization of `-d^2/dx^2` on `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    /// `psi'(0) = sigma0 psi(0)`, `psi'(L) = -sigma_l psi(L)`.
    Robin { sigma0: f64, sigma_l: f64 },
    /// `psi(0) = psi(L) = 0`.
    Dirichlet,
    /// `psi(0) = e^{i theta} psi(L)`, `theta` in `[0, 2 pi)`.
    Twisted { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub length: f64,
}

impl BoundarySpec {
    pub fn robin(sigma0: f64, sigma_l: f64, length: f64) -> Result<Self> {
        if !(sigma0.is_finite() && sigma_l.is_finite()) {
            return Err(Error::invalid("Robin parameters must be finite"));
        }
        Self::checked(BoundaryKind::Robin { sigma0, sigma_l }, length)
    }

    pub fn neumann(length: f64) -> Result<Self> {
        Self::robin(0.0, 0.0, length)
    }

    pub fn dirichlet(length: f64) -> Result<Self> {
        Self::checked(BoundaryKind::Dirichlet, length)
    }

    pub fn twisted(theta: f64, length: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid("twist angle must be finite"));
        }
        Self::checked(
            BoundaryKind::Twisted {
                theta: theta.rem_euclid(2.0 * PI),
            },
            length,
        )
    }

    fn checked(kind: BoundaryKind, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid(format!("interval length must be positive, got {length}")));
        }
        Ok(BoundarySpec { kind, length })
    }

    /// The grid layout natural to this boundary condition.
    pub fn grid(&self, n: usize) -> Result<GridSpec> {
        match self.kind {
            BoundaryKind::Twisted { theta } => GridSpec::twisted(self.length, n, theta),
            _ => GridSpec::closed(self.length, n),
        }
    }

    /// Whether the state is confined with zero boundary flux (Robin and
    /// Dirichlet) as opposed to closed onto a twisted ring.
    pub fn is_confining(&self) -> bool {
        !matches!(self.kind, BoundaryKind::Twisted { .. })
    }
}

/// Eigenpair of a boundary Hamiltonian sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    pub index: usize,
    pub energy: f64,
    /// Unit discrete norm; first nonzero sample real and positive. Carries
    /// exact derivative samples.
    pub wave: WaveFunction,
    /// Interior sign changes. `None` for complex (twisted) modes.
    pub node_count: Option<usize>,
    /// Momentum eigenvalue for twisted modes.
    pub momentum: Option<f64>,
}

/// `cos(sqrt(E) x)` continued to all real `E`.
fn cos_entire(e: f64, x: f64) -> f64 {
    if e > 0.0 {
        (e.sqrt() * x).cos()
    } else if e < 0.0 {
        ((-e).sqrt() * x).cosh()
    } else {
        1.0
    }
}

/// `sin(sqrt(E) x) / sqrt(E)` continued to all real `E`.
fn sin_entire(e: f64, x: f64) -> f64 {
    if e > 0.0 {
        let k = e.sqrt();
        (k * x).sin() / k
    } else if e < 0.0 {
        let k = (-e).sqrt();
        (k * x).sinh() / k
    } else {
        x
    }
}

/// Solution of `-psi'' = E psi` with `psi(0) = 1`, `psi'(0) = sigma0`,
/// returned as `(psi(x), psi'(x))`.
fn robin_solution(e: f64, sigma0: f64, x: f64) -> (f64, f64) {
    let c = cos_entire(e, x);
    let s = sin_entire(e, x);
    (c + sigma0 * s, -e * s + sigma0 * c)
}

/// Eigenvalue condition for Robin boundaries, entire in `E`:
/// `(sigma0 sigma_l - E) S(L) + (sigma0 + sigma_l) C(L)`.
pub fn robin_residual(e: f64, sigma0: f64, sigma_l: f64, length: f64) -> f64 {
    (sigma0 * sigma_l - e) * sin_entire(e, length) + (sigma0 + sigma_l) * cos_entire(e, length)
}

/// Number of Robin eigenvalues strictly below `e`, from the Prüfer angle of
/// the solution that satisfies the left boundary condition.
pub fn robin_count_below(e: f64, sigma0: f64, sigma_l: f64, length: f64) -> usize {
    // Zeros of psi(.; E) in the open interval.
    let zeros = if e > 0.0 {
        let k = e.sqrt();
        let phase0 = k.atan2(sigma0);
        ((k * length + phase0) / PI).ceil() as usize - 1
    } else if sigma0 < 0.0 {
        let x0 = if e == 0.0 {
            -1.0 / sigma0
        } else {
            let kappa = (-e).sqrt();
            let r = kappa / -sigma0;
            if r < 1.0 {
                r.atanh() / kappa
            } else {
                f64::INFINITY
            }
        };
        usize::from(x0 > 0.0 && x0 < length)
    } else {
        0
    };
    let (psi, dpsi) = robin_solution(e, sigma0, length);
    let phi = if psi > 0.0 {
        psi.atan2(dpsi)
    } else if psi < 0.0 {
        psi.atan2(dpsi) + PI
    } else {
        PI
    };
    let theta_right = 1f64.atan2(-sigma_l);
    zeros + usize::from(theta_right < phi)
}

/// Lowest `n_modes` eigenpairs of the boundary Hamiltonian, sorted by energy.
pub fn solve_spectrum(bc: &BoundarySpec, grid: &GridSpec, n_modes: usize) -> Result<Vec<EigenMode>> {
    if n_modes == 0 {
        return Err(Error::invalid("n_modes must be at least 1"));
    }
    let required = 16 * n_modes;
    if grid.n < required {
        return Err(Error::GridTooCoarse {
            points: grid.n,
            modes: n_modes,
            required,
        });
    }
    if (grid.length - bc.length).abs() > 1e-12 * bc.length {
        return Err(Error::invalid("grid length differs from the interval length"));
    }
    match (bc.kind, grid.kind) {
        (BoundaryKind::Twisted { theta }, GridKind::Periodic { twist }) => {
            if (theta - twist).abs() > 1e-12 {
                return Err(Error::invalid("grid twist differs from the boundary twist"));
            }
            twisted_modes(theta, grid, n_modes)
        }
        (BoundaryKind::Twisted { .. }, GridKind::Closed) => {
            Err(Error::invalid("twisted boundary conditions need a periodic grid"))
        }
        (_, GridKind::Periodic { .. }) => Err(Error::invalid("Robin and Dirichlet spectra need a closed grid")),
        (BoundaryKind::Dirichlet, GridKind::Closed) => dirichlet_modes(grid, n_modes),
        (BoundaryKind::Robin { sigma0, sigma_l }, GridKind::Closed) => robin_modes(sigma0, sigma_l, grid, n_modes),
    }
}

fn real_mode(grid: &GridSpec, index: usize, energy: f64, f: impl Fn(f64) -> (f64, f64)) -> Result<EigenMode> {
    let xs = grid.points();
    let (values, slopes): (Vec<_>, Vec<_>) = xs
        .iter()
        .map(|&x| {
            let (v, d) = f(x - grid.origin);
            (Complex64::new(v, 0.0), Complex64::new(d, 0.0))
        })
        .unzip();
    let mut wave = WaveFunction::with_derivative(*grid, values, slopes)?.normalized()?;
    let first = wave
        .values()
        .iter()
        .find(|z| z.norm() > 1e-300)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    if first.re < 0.0 {
        wave = wave.scaled(Complex64::new(-1.0, 0.0));
    }
    let node_count = count_nodes(wave.values());
    if node_count != index {
        return Err(Error::MissedRoot {
            expected: index,
            found: node_count,
        });
    }
    Ok(EigenMode {
        index,
        energy,
        wave,
        node_count: Some(node_count),
        momentum: None,
    })
}

fn count_nodes(values: &[Complex64]) -> usize {
    let n = values.len();
    let scale = values.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let interior: Vec<f64> = values[1..n - 1]
        .iter()
        .map(|z| z.re)
        .filter(|v| v.abs() > 1e-12 * scale)
        .collect();
    interior.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

fn dirichlet_modes(grid: &GridSpec, n_modes: usize) -> Result<Vec<EigenMode>> {
    let l = grid.length;
    (0..n_modes)
        .map(|i| {
            let k = (i + 1) as f64 * PI / l;
            real_mode(grid, i, k * k, |x| ((k * x).sin(), k * (k * x).cos()))
        })
        .collect()
}

fn robin_modes(sigma0: f64, sigma_l: f64, grid: &GridSpec, n_modes: usize) -> Result<Vec<EigenMode>> {
    let l = grid.length;
    let count = |e: f64| robin_count_below(e, sigma0, sigma_l, l);

    // Quadratic-form lower bound: H >= -(s^2 + 2 s / L) with s the strongest
    // attractive wall.
    let s = 0f64.max(-sigma0).max(-sigma_l);
    let e_lo = -(s * s + 2.0 * s / l) - 1.0;
    if count(e_lo) != 0 {
        return Err(Error::MissedRoot {
            expected: 0,
            found: count(e_lo),
        });
    }
    // Place the upper end halfway between E_{n-1} and E_n.
    let threshold = |target: usize| -> f64 {
        let mut hi = ((target as f64 + 1.0) * PI / l).powi(2) + 1.0;
        while count(hi) < target {
            hi *= 2.0;
        }
        let mut lo = e_lo;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-13 * hi.abs().max(1.0) {
                break;
            }
        }
        hi
    };
    let e_hi = 0.5 * (threshold(n_modes) + threshold(n_modes + 1));
    let energies = find_roots(
        |e| robin_residual(e, sigma0, sigma_l, l),
        e_lo,
        e_hi,
        &RootScan::expecting(n_modes),
    )?;
    energies
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let mode = real_mode(grid, i, e, |x| robin_solution(e, sigma0, x))?;
            let residual = boundary_condition_residual(&BoundaryKind::Robin { sigma0, sigma_l }, &mode.wave);
            if residual > 1e-8 {
                return Err(Error::BoundaryViolation {
                    residual,
                    tolerance: 1e-8,
                });
            }
            Ok(mode)
        })
        .collect()
}

/// Momentum eigenvalues `(2 pi n - theta) / L` of smallest magnitude, ordered
/// by `|k|` with ties broken by sign (negative first).
pub fn momentum_spectrum_twisted(theta: f64, length: f64, n_modes: usize) -> Result<Vec<f64>> {
    if n_modes == 0 {
        return Err(Error::invalid("n_modes must be at least 1"));
    }
    let bc = BoundarySpec::twisted(theta, length)?;
    let BoundaryKind::Twisted { theta } = bc.kind else {
        unreachable!()
    };
    let reach = n_modes as i64 / 2 + 2;
    let mut ks: Vec<f64> = (-reach..=reach)
        .map(|n| (2.0 * PI * n as f64 - theta) / length)
        .collect();
    ks.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    ks.truncate(n_modes);
    Ok(ks)
}

fn twisted_modes(theta: f64, grid: &GridSpec, n_modes: usize) -> Result<Vec<EigenMode>> {
    let ks = momentum_spectrum_twisted(theta, grid.length, n_modes)?;
    ks.into_iter()
        .enumerate()
        .map(|(i, k)| {
            let o = grid.origin;
            let wave = WaveFunction::sample_with_derivative(
                *grid,
                |x| Complex64::new(0.0, k * (x - o)).exp(),
                |x| Complex64::new(0.0, k) * Complex64::new(0.0, k * (x - o)).exp(),
            )?
            .normalized()?;
            Ok(EigenMode {
                index: i,
                energy: k * k,
                wave,
                node_count: None,
                momentum: Some(k),
            })
        })
        .collect()
}

/// How far `psi` is from satisfying the boundary condition, scaled by the
/// size of the terms involved.
pub(crate) fn boundary_condition_residual(kind: &BoundaryKind, psi: &WaveFunction) -> f64 {
    let scale_of = |a: Complex64, b: Complex64| (a.norm() + b.norm()).max(1.0);
    match *kind {
        BoundaryKind::Robin { sigma0, sigma_l } => {
            let b = psi.boundary_data();
            let left = b.slope_start - b.value_start * sigma0;
            let right = b.slope_end + b.value_end * sigma_l;
            (left.norm() / scale_of(b.slope_start, b.value_start * sigma0))
                .max(right.norm() / scale_of(b.slope_end, b.value_end * sigma_l))
        }
        BoundaryKind::Dirichlet => {
            let v = psi.values();
            let scale = psi.norm().max(1e-300) / psi.grid().length.sqrt();
            v[0].norm().max(v[v.len() - 1].norm()) / scale
        }
        BoundaryKind::Twisted { theta } => {
            if !psi.grid().is_periodic() || (psi.grid().twist() - theta).abs() > 1e-12 {
                return f64::INFINITY;
            }
            let end = psi.extrapolated_end_value();
            let start = psi.values()[0];
            let mismatch = start - Complex64::new(0.0, theta).exp() * end;
            mismatch.norm() / scale_of(start, end)
        }
    }
}

/// Expansion of a state over a set of eigenmodes on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub modes: Vec<EigenMode>,
    pub coefficients: Vec<Complex64>,
    /// Fraction of `||psi||^2` carried by the expansion.
    pub captured: f64,
}

impl SpectralDecomposition {
    /// Project `psi` onto `modes`.
    pub fn project(psi: &WaveFunction, modes: Vec<EigenMode>) -> Result<Self> {
        let coefficients = modes
            .iter()
            .map(|m| m.wave.inner(psi))
            .collect::<Result<Vec<_>>>()?;
        let weight: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        let captured = weight / (psi.norm() * psi.norm());
        Ok(SpectralDecomposition {
            modes,
            coefficients,
            captured,
        })
    }

    /// A state given directly by its coefficients.
    pub fn from_coefficients(modes: Vec<EigenMode>, coefficients: Vec<Complex64>) -> Result<Self> {
        if modes.len() != coefficients.len() {
            return Err(Error::DimensionMismatch("one coefficient per mode".into()));
        }
        if modes.is_empty() {
            return Err(Error::invalid("empty decomposition"));
        }
        let decomposition = SpectralDecomposition {
            modes,
            coefficients,
            captured: 1.0,
        };
        let psi = decomposition.synthesize(&vec![0.0; decomposition.modes.len()])?;
        let weight: f64 = decomposition.coefficients.iter().map(|c| c.norm_sqr()).sum();
        Ok(SpectralDecomposition {
            captured: weight / (psi.norm() * psi.norm()).max(f64::MIN_POSITIVE),
            ..decomposition
        })
    }

    /// `sum_n c_n e^{-i phase_n} psi_n`.
    pub(crate) fn synthesize(&self, phases: &[f64]) -> Result<WaveFunction> {
        let terms: Vec<(Complex64, &WaveFunction)> = self
            .coefficients
            .iter()
            .zip(&self.modes)
            .zip(phases)
            .map(|((c, m), p)| (c * Complex64::new(0.0, -p).exp(), &m.wave))
            .collect();
        WaveFunction::combine(&terms)
    }
}

/// Coefficient of the Dirichlet ground state `sqrt(2/L) sin(pi x / L)` along
/// the twisted plane wave `e^{ikx} / sqrt(L)`, in closed form.
pub fn dirichlet_ground_twisted_coefficient(k: f64, length: f64) -> Complex64 {
    let a = PI / length;
    let i = Complex64::new(0.0, 1.0);
    // int_0^L e^{i q x} dx
    let plane = |q: f64| -> Complex64 {
        if (q * length).abs() < 1e-8 {
            Complex64::new(length, 0.0) + i * q * length * length / 2.0
        } else {
            ((i * q * length).exp() - 1.0) / (i * q)
        }
    };
    let integral = (plane(a - k) - plane(-a - k)) / (2.0 * i);
    integral * (2.0f64.sqrt() / length)
}

/// Partial sums `sum |k_n|^power |c_n|^2` of the Dirichlet ground state over
/// the first `n` twisted momentum eigenfunctions, for each `n` in `counts`.
/// `power = 2` is the momentum-domain moment, `power = 4` the energy-domain one.
pub fn dirichlet_ground_twisted_moments(theta: f64, length: f64, power: i32, counts: &[usize]) -> Result<Vec<f64>> {
    let max = counts.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Err(Error::invalid("need at least one positive mode count"));
    }
    let ks = momentum_spectrum_twisted(theta, length, max)?;
    let terms: Vec<f64> = ks
        .iter()
        .map(|&k| k.abs().powi(power) * dirichlet_ground_twisted_coefficient(k, length).norm_sqr())
        .collect();
    Ok(counts.iter().map(|&n| terms[..n].iter().sum()).collect())
}
