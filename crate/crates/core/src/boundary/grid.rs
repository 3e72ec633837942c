use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{fft_frequencies, Fft};
use crate::{Error, Result};

/// Minimum number of sample points on any grid.
pub const MIN_POINTS: usize = 16;

/// Sampling layout of a one-dimensional domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// Endpoints included, spacing `L / (n - 1)`.
    Closed,
    /// Half-open `[origin, origin + L)`, spacing `L / n`, with functions obeying
    /// `psi(origin) = e^{i twist} psi(origin + L)`.
    Periodic { twist: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub length: f64,
    pub n: usize,
    pub origin: f64,
    pub kind: GridKind,
}

impl GridSpec {
    pub fn closed(length: f64, n: usize) -> Result<Self> {
        Self::build(length, n, GridKind::Closed)
    }

    pub fn periodic(length: f64, n: usize) -> Result<Self> {
        Self::twisted(length, n, 0.0)
    }

    pub fn twisted(length: f64, n: usize, twist: f64) -> Result<Self> {
        if !twist.is_finite() {
            return Err(Error::invalid("twist angle must be finite"));
        }
        Self::build(
            length,
            n,
            GridKind::Periodic {
                twist: twist.rem_euclid(2.0 * PI),
            },
        )
    }

    fn build(length: f64, n: usize, kind: GridKind) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid(format!("grid length must be positive, got {length}")));
        }
        if n < MIN_POINTS {
            return Err(Error::invalid(format!("grid needs at least {MIN_POINTS} points, got {n}")));
        }
        Ok(GridSpec {
            length,
            n,
            origin: 0.0,
            kind,
        })
    }

    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, GridKind::Periodic { .. })
    }

    pub fn twist(&self) -> f64 {
        match self.kind {
            GridKind::Closed => 0.0,
            GridKind::Periodic { twist } => twist,
        }
    }

    pub fn spacing(&self) -> f64 {
        match self.kind {
            GridKind::Closed => self.length / (self.n - 1) as f64,
            GridKind::Periodic { .. } => self.length / self.n as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        if matches!(self.kind, GridKind::Closed) && i == self.n - 1 {
            return self.origin + self.length;
        }
        self.origin + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.origin + self.length
    }

    /// Quadrature weights. Closed grids use the fourth-order Gregory
    /// end-corrected trapezoid rule; periodic grids the rectangle rule.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        if matches!(self.kind, GridKind::Closed) {
            let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
            for (j, e) in ends.iter().enumerate() {
                w[j] = e * h;
                w[self.n - 1 - j] = e * h;
            }
        }
        w
    }

    /// Index of the grid point at `x`, if `x` is one. On periodic grids the
    /// far end `origin + L` maps to `None` here and is handled by callers
    /// through the twist.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let h = self.spacing();
        let s = (x - self.origin) / h;
        let i = s.round();
        if i < 0.0 || (s - i).abs() > 1e-9 {
            return None;
        }
        let i = i as usize;
        (i < self.n).then_some(i)
    }

    pub(crate) fn same_as(&self, other: &GridSpec) -> bool {
        self.n == other.n
            && self.kind == other.kind
            && (self.length - other.length).abs() <= 1e-14 * self.length
            && (self.origin - other.origin).abs() <= 1e-14 * self.length.max(1.0)
    }
}

/// Complex state sampled on a grid.
///
/// `derivative` carries exact derivative samples when the state was built
/// from analytically known functions (eigenmodes, plane waves); otherwise
/// derivatives are taken numerically on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
    derivative: Option<Vec<Complex64>>,
    norm: f64,
}

/// Values and first derivatives at both ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub value_start: Complex64,
    pub slope_start: Complex64,
    pub value_end: Complex64,
    pub slope_end: Complex64,
}

impl WaveFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a {}-point grid",
                values.len(),
                grid.n
            )));
        }
        let norm = discrete_norm(&grid, &values);
        Ok(WaveFunction {
            grid,
            values,
            derivative: None,
            norm,
        })
    }

    pub fn with_derivative(grid: GridSpec, values: Vec<Complex64>, derivative: Vec<Complex64>) -> Result<Self> {
        if derivative.len() != grid.n {
            return Err(Error::DimensionMismatch("derivative sample count".into()));
        }
        let mut psi = Self::new(grid, values)?;
        psi.derivative = Some(derivative);
        Ok(psi)
    }

    /// Sample `f` (and optionally its derivative `df`) on the grid.
    pub fn sample(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn sample_with_derivative(
        grid: GridSpec,
        f: impl Fn(f64) -> Complex64,
        df: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let xs = grid.points();
        Self::with_derivative(
            grid,
            xs.iter().map(|&x| f(x)).collect(),
            xs.iter().map(|&x| df(x)).collect(),
        )
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn has_exact_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Scale to unit discrete norm.
    pub fn normalized(mut self) -> Result<Self> {
        if !(self.norm > 0.0) {
            return Err(Error::invalid("cannot normalize a zero state"));
        }
        let s = 1.0 / self.norm;
        self.values.iter_mut().for_each(|z| *z *= s);
        if let Some(d) = self.derivative.as_mut() {
            d.iter_mut().for_each(|z| *z *= s);
        }
        self.norm = discrete_norm(&self.grid, &self.values);
        Ok(self)
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.values.iter_mut().for_each(|z| *z *= factor);
        if let Some(d) = self.derivative.as_mut() {
            d.iter_mut().for_each(|z| *z *= factor);
        }
        self.norm *= factor.norm();
        self
    }

    /// `<self, other>` with the grid's quadrature weights.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(weighted_inner(&self.grid.weights(), &self.values, &other.values))
    }

    /// Linear combination `sum c_i psi_i` on a common grid. The exact
    /// derivative is kept only if every term has one.
    pub fn combine(terms: &[(Complex64, &WaveFunction)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::invalid("empty combination"))?;
        let grid = first.grid;
        let n = grid.n;
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        let mut derivative = terms
            .iter()
            .all(|(_, w)| w.derivative.is_some())
            .then(|| vec![Complex64::new(0.0, 0.0); n]);
        for (c, w) in terms {
            if !w.grid.same_as(&grid) {
                return Err(Error::GridMismatch);
            }
            for (v, x) in values.iter_mut().zip(&w.values) {
                *v += c * x;
            }
            if let (Some(acc), Some(d)) = (derivative.as_mut(), w.derivative.as_ref()) {
                for (v, x) in acc.iter_mut().zip(d) {
                    *v += c * x;
                }
            }
        }
        match derivative {
            Some(d) => Self::with_derivative(grid, values, d),
            None => Self::new(grid, values),
        }
    }

    /// First derivative samples: exact when carried, spectral on periodic
    /// grids, fourth-order finite differences on closed grids.
    pub fn derivative(&self) -> Vec<Complex64> {
        if let Some(d) = &self.derivative {
            return d.clone();
        }
        match self.grid.kind {
            GridKind::Closed => fd4_derivative(&self.values, self.grid.spacing()),
            GridKind::Periodic { twist } => spectral_derivative(&self.grid, twist, &self.values),
        }
    }

    /// Value and slope at `origin` and `origin + L`. On periodic grids the far
    /// end follows from the twist: `psi(L) = e^{-i theta} psi(0)`.
    pub fn boundary_data(&self) -> BoundaryData {
        let d = self.derivative();
        let n = self.grid.n;
        match self.grid.kind {
            GridKind::Closed => BoundaryData {
                value_start: self.values[0],
                slope_start: d[0],
                value_end: self.values[n - 1],
                slope_end: d[n - 1],
            },
            GridKind::Periodic { twist } => {
                let phase = Complex64::new(0.0, -twist).exp();
                BoundaryData {
                    value_start: self.values[0],
                    slope_start: d[0],
                    value_end: phase * self.values[0],
                    slope_end: phase * d[0],
                }
            }
        }
    }

    /// Value at the far end of a periodic grid reconstructed from the last
    /// six interior samples only, by polynomial extrapolation. Used to test
    /// whether samples are compatible with the grid's twist.
    pub(crate) fn extrapolated_end_value(&self) -> Complex64 {
        let n = self.grid.n;
        // Lagrange weights for extrapolating one step past six equispaced nodes.
        const W: [f64; 6] = [-1.0, 6.0, -15.0, 20.0, -15.0, 6.0];
        (0..6).map(|j| self.values[n - 6 + j] * W[j]).sum()
    }
}

pub(crate) fn weighted_inner(weights: &[f64], a: &[Complex64], b: &[Complex64]) -> Complex64 {
    weights
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| x.conj() * y * *w)
        .sum()
}

fn discrete_norm(grid: &GridSpec, values: &[Complex64]) -> f64 {
    grid.weights()
        .iter()
        .zip(values)
        .map(|(w, z)| w * z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Fourth-order central differences with one-sided fourth-order stencils at
/// the two points nearest each end.
pub(crate) fn fd4_derivative(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    assert!(n >= 5, "fourth-order stencils need five points");
    let s = 1.0 / (12.0 * h);
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    d[0] = (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * s;
    d[1] = (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * s;
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * s;
    }
    d[n - 1] = (f[n - 1] * 25.0 - f[n - 2] * 48.0 + f[n - 3] * 36.0 - f[n - 4] * 16.0 + f[n - 5] * 3.0) * s;
    d[n - 2] = (f[n - 1] * 3.0 + f[n - 2] * 10.0 - f[n - 3] * 18.0 + f[n - 4] * 6.0 - f[n - 5]) * s;
    d
}

fn spectral_derivative(grid: &GridSpec, twist: f64, values: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n;
    let l = grid.length;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 * grid.spacing()).collect();
    // g(x) = e^{i theta x / L} psi(x) is periodic on [0, L).
    let mut g: Vec<Complex64> = values
        .iter()
        .zip(&xs)
        .map(|(v, x)| v * Complex64::new(0.0, twist * x / l).exp())
        .collect();
    let fft = Fft::new(n);
    fft.forward(&mut g);
    let k = fft_frequencies(n, l);
    for (j, z) in g.iter_mut().enumerate() {
        if n % 2 == 0 && j == n / 2 {
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z *= Complex64::new(0.0, k[j]);
        }
    }
    fft.inverse(&mut g);
    g.iter()
        .zip(values)
        .zip(&xs)
        .map(|((dg, v), x)| {
            Complex64::new(0.0, -twist * x / l).exp() * dg - v * Complex64::new(0.0, twist / l)
        })
        .collect()
}
