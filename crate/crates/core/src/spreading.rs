//! Time evolution and localization probabilities.
//!
//! A localization observable `N(V)` with `0 <= N(V) <= 1` and its complement
//! `A = 1 - N(V)` give the probability `p_A(t) = (psi_t, A psi_t)` of finding
//! the particle outside `V`. For a positive Hamiltonian this probability is
//! either identically zero or nonzero for almost every `t`. The evolutions
//! here produce both branches: a confined particle whose `V` is the whole
//! box, and a free particle on the line whose compact support leaks out
//! immediately.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{solve_spectrum, BoundarySpec, GridSpec, SpectralDecomposition, WaveFunction};
use crate::numerics::{fft_frequencies, Fft};
use crate::{Error, Result};

/// Smallest tail probability the free-line solver can tell apart from
/// round-off.
pub const NOISE_FLOOR: f64 = 1e-13;
/// Allowed excursion of a probability outside `[0, 1]` before clamping.
pub const RANGE_TOLERANCE: f64 = 1e-10;
/// Smallest number of samples accepted by [`classify_dichotomy`].
pub const MIN_DICHOTOMY_SAMPLES: usize = 64;
/// Embedding box length in units of the initial support width.
pub const BOX_FACTOR: f64 = 8.0;
/// Default number of free-line samples.
pub const DEFAULT_POINTS: usize = 1 << 14;

const BOUNDED_CAPTURE: f64 = 1.0 - 1e-10;
// Samples below this fraction of the peak count as outside the support.
const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Closed interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub a: f64,
    pub b: f64,
}

impl Region {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("region [{a}, {b}] must be a finite interval with a < b")));
        }
        Ok(Region { a, b })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalizationKind {
    /// Multiplication by the indicator of `V`.
    ProjectorMultiplication(Region),
    /// `|chi_V)(chi_V|`, scaled by `1/|V|` when `normalized`.
    RankOne { region: Region, normalized: bool },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationOperator {
    pub kind: LocalizationKind,
    /// Represents `1 - N(V)` instead of `N(V)`.
    pub complement: bool,
}

impl LocalizationOperator {
    pub fn projector(region: Region) -> Self {
        LocalizationOperator {
            kind: LocalizationKind::ProjectorMultiplication(region),
            complement: false,
        }
    }

    /// Rank-one `|chi_V)(chi_V|`. Without normalization it exceeds one when
    /// `|V| > 1` and is rejected.
    pub fn rank_one(region: Region, normalized: bool) -> Result<Self> {
        if !normalized && region.width() > 1.0 {
            return Err(Error::invalid(format!(
                "unnormalized rank-one localization needs |V| <= 1, got {}",
                region.width()
            )));
        }
        Ok(LocalizationOperator {
            kind: LocalizationKind::RankOne { region, normalized },
            complement: false,
        })
    }

    pub fn complement(mut self) -> Self {
        self.complement = !self.complement;
        self
    }

    pub fn region(&self) -> Region {
        match self.kind {
            LocalizationKind::ProjectorMultiplication(r) => r,
            LocalizationKind::RankOne { region, .. } => region,
        }
    }

    /// The operator with the complement flag cleared.
    pub fn base(&self) -> Self {
        LocalizationOperator {
            complement: false,
            ..*self
        }
    }
}

/// Sampled `p_A(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityRecord {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Confined,
    Spreading,
}

/// What the sampled nonzero set looked like.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportEvidence {
    pub samples: usize,
    pub nonzero: usize,
    pub first_nonzero_time: Option<f64>,
    pub min_nonzero_value: Option<f64>,
    pub max_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DichotomyVerdict {
    pub branch: Branch,
    pub zero_fraction: f64,
    pub support_evidence: SupportEvidence,
}

/// Grid for free-line states: periodic box `[-L/2, L/2)` with `n` points.
pub fn free_line_grid(box_length: f64, n: usize) -> Result<GridSpec> {
    Ok(GridSpec::periodic(box_length, n)?.with_origin(-0.5 * box_length))
}

/// Normalized Gaussian with position spread `sigma`:
/// `(2 pi sigma^2)^{-1/4} exp(-(x - c)^2 / (4 sigma^2))`.
pub fn gaussian_state(grid: GridSpec, center: f64, sigma: f64) -> Result<WaveFunction> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("gaussian width must be positive"));
    }
    let a = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    WaveFunction::sample(grid, |x| {
        let u = x - center;
        Complex64::new(a * (-u * u / (4.0 * sigma * sigma)).exp(), 0.0)
    })
}

/// Free Gaussian at time `t`, mass `m`, started from [`gaussian_state`].
pub fn gaussian_evolved(x: f64, center: f64, sigma: f64, t: f64, m: f64) -> Complex64 {
    let s2 = sigma * sigma;
    let z = Complex64::new(1.0, t / (2.0 * m * s2));
    let u = x - center;
    let a = (2.0 * std::f64::consts::PI * s2).powf(-0.25);
    a / z.sqrt() * (-u * u / (4.0 * s2 * z)).exp()
}

/// The smooth compactly supported bump `exp(-1 / (1 - u^2))`,
/// `u = (x - c) / r`, normalized on the grid.
pub fn bump_state(grid: GridSpec, center: f64, radius: f64) -> Result<WaveFunction> {
    if !(radius > 0.0) {
        return Err(Error::invalid("bump radius must be positive"));
    }
    WaveFunction::sample(grid, |x| {
        let u = (x - center) / radius;
        if u.abs() < 1.0 {
            Complex64::new((-1.0 / (1.0 - u * u)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?
    .normalized()
}

/// Free evolution `exp(-i t p^2 / 2m)` of a fixed initial state, computed in
/// a periodic embedding box.
pub struct FreeLine {
    grid: GridSpec,
    spectrum: Vec<Complex64>,
    wavenumbers: Vec<f64>,
    mass: f64,
    fft: Fft,
    initial: WaveFunction,
}

impl FreeLine {
    /// Check the embedding and transform `psi0`. The grid must be periodic
    /// without twist, at least 8 support widths long, with the support at
    /// least a quarter box away from either edge.
    pub fn new(psi0: &WaveFunction, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid("mass must be positive"));
        }
        let grid = *psi0.grid();
        if !grid.is_periodic() || grid.twist() != 0.0 {
            return Err(Error::invalid("free-line states live on an untwisted periodic grid"));
        }
        let (lo, hi) = support(psi0).ok_or_else(|| Error::invalid("free-line state is zero"))?;
        let h = grid.spacing();
        let width = hi - lo + h;
        if grid.length < BOX_FACTOR * width {
            return Err(Error::SupportTooWide(format!(
                "support width {width} needs a box of at least {}, have {}",
                BOX_FACTOR * width,
                grid.length
            )));
        }
        let margin = 0.25 * grid.length;
        if lo - grid.origin < margin || grid.end() - hi < margin {
            return Err(Error::SupportTooWide(format!(
                "support [{lo}, {hi}] lies within a quarter box of the edge of [{}, {}]",
                grid.origin,
                grid.end()
            )));
        }
        let fft = Fft::new(grid.n);
        let mut spectrum = psi0.values().to_vec();
        fft.forward(&mut spectrum);
        Ok(FreeLine {
            grid,
            spectrum,
            wavenumbers: fft_frequencies(grid.n, grid.length),
            mass,
            fft,
            initial: psi0.clone(),
        })
    }

    pub fn initial(&self) -> &WaveFunction {
        &self.initial
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// State at time `t`; `t = 0` returns the initial state unchanged.
    pub fn evolve(&self, t: f64) -> Result<WaveFunction> {
        if !t.is_finite() {
            return Err(Error::invalid("time must be finite"));
        }
        if t == 0.0 {
            return Ok(self.initial.clone());
        }
        // The grid origin shifts sample positions but not the dispersion
        // phase, since multiplication by e^{ik x0} commutes with it.
        let mut data: Vec<Complex64> = self
            .spectrum
            .iter()
            .zip(&self.wavenumbers)
            .map(|(c, k)| c * Complex64::new(0.0, -t * k * k / (2.0 * self.mass)).exp())
            .collect();
        self.fft.inverse(&mut data);
        WaveFunction::new(self.grid, data)
    }

    /// Bound on the wrap-around and band-limit error of [`evolve`] at `t`:
    /// the probability within an eighth of a box of either edge plus the
    /// spectral weight in the top tenth of the band.
    ///
    /// [`evolve`]: FreeLine::evolve
    pub fn aliasing_bound(&self, t: f64) -> Result<f64> {
        let psi = self.evolve(t)?;
        let edge = 0.125 * self.grid.length;
        let total = psi.norm() * psi.norm();
        let near_edge: f64 = self
            .grid
            .points()
            .iter()
            .zip(psi.values())
            .filter(|(x, _)| **x - self.grid.origin < edge || self.grid.end() - **x < edge)
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            * self.grid.spacing();
        let k_max = std::f64::consts::PI / self.grid.spacing();
        let band: f64 = self
            .spectrum
            .iter()
            .zip(&self.wavenumbers)
            .filter(|(_, k)| k.abs() > 0.9 * k_max)
            .map(|(c, _)| c.norm_sqr())
            .sum();
        let spectral_total: f64 = self.spectrum.iter().map(|c| c.norm_sqr()).sum();
        Ok(near_edge / total.max(f64::MIN_POSITIVE) + band / spectral_total.max(f64::MIN_POSITIVE))
    }
}

/// One-shot free evolution; see [`FreeLine`].
pub fn evolve_free_line(psi0: &WaveFunction, t: f64, mass: f64) -> Result<WaveFunction> {
    FreeLine::new(psi0, mass)?.evolve(t)
}

/// `sum_n c_n e^{-i E_n t} psi_n`.
pub fn evolve_bounded(decomposition: &SpectralDecomposition, t: f64) -> Result<WaveFunction> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    if !(decomposition.captured >= BOUNDED_CAPTURE) {
        return Err(Error::TruncatedBasis {
            captured: decomposition.captured,
        });
    }
    let phases: Vec<f64> = decomposition.modes.iter().map(|m| m.energy * t).collect();
    decomposition.synthesize(&phases)
}

/// Expectation of `N` (or `1 - N` when the complement flag is set) in the
/// normalized state `psi / ||psi||`.
pub fn localization_probability(psi: &WaveFunction, op: &LocalizationOperator) -> Result<f64> {
    let (inside, outside) = raw_probability(psi, &op.base())?;
    clamp_probability(if op.complement { outside } else { inside })
}

/// `(<N>, <1 - N>)` in the normalized state. For the projector both parts
/// are integrals of a non-negative interpolant, so each lies in `[0, 1]`.
fn raw_probability(psi: &WaveFunction, op: &LocalizationOperator) -> Result<(f64, f64)> {
    let grid = psi.grid();
    let region = op.region();
    let (a, b) = (region.a.max(grid.origin), region.b.min(grid.end()));
    if !(a < b) {
        return Err(Error::EmptyRegion);
    }
    let values = psi.values();
    let inside = density_over(grid, values, a, b);
    let outside = density_over(grid, values, grid.origin, a) + density_over(grid, values, b, grid.end());
    let norm2 = inside + outside;
    if !(norm2 > 0.0) {
        return Err(Error::invalid("localization of a zero state"));
    }
    match op.kind {
        LocalizationKind::ProjectorMultiplication(_) => Ok((inside / norm2, outside / norm2)),
        LocalizationKind::RankOne { normalized, .. } => {
            // chi_V is the indicator of V itself; only its overlap with the
            // domain contributes, but the normalization uses the full |V|.
            let overlap = integrate_over(grid, values, a, b);
            let scale = if normalized { 1.0 / region.width() } else { 1.0 };
            let p = overlap.norm_sqr() * scale / norm2;
            Ok((p, 1.0 - p))
        }
    }
}

fn clamp_probability(p: f64) -> Result<f64> {
    if !(p >= -RANGE_TOLERANCE && p <= 1.0 + RANGE_TOLERANCE) {
        return Err(Error::Assertion(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// How a [`p_a_series`] run evolves its initial state.
#[derive(Debug, Clone, PartialEq)]
pub enum Evolution {
    /// Free particle of the given mass on the line.
    FreeLine { mass: f64 },
    /// Interval with the given walls, expanded over its lowest `modes`
    /// eigenmodes.
    Bounded { boundary: BoundarySpec, modes: usize },
}

/// `p_A(t_i)` for `A = 1 - N(V)`.
pub fn p_a_series(
    psi0: &WaveFunction,
    evolution: &Evolution,
    a: &LocalizationOperator,
    times: &[f64],
) -> Result<ProbabilityRecord> {
    if !a.complement {
        return Err(Error::invalid("p_A needs the complement operator A = 1 - N(V)"));
    }
    if times.is_empty() {
        return Err(Error::invalid("no sample times"));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sample times must be finite and strictly increasing"));
    }
    let n = a.base();
    let values: Vec<f64> = match evolution {
        Evolution::FreeLine { mass } => {
            let line = FreeLine::new(psi0, *mass)?;
            times
                .par_iter()
                .map(|&t| series_value(&line.evolve(t)?, &n))
                .collect::<Result<_>>()?
        }
        Evolution::Bounded { boundary, modes } => {
            let eigen = solve_spectrum(boundary, psi0.grid(), *modes)?;
            let decomposition = SpectralDecomposition::project(psi0, eigen)?;
            times
                .par_iter()
                .map(|&t| series_value(&evolve_bounded(&decomposition, t)?, &n))
                .collect::<Result<_>>()?
        }
    };
    Ok(ProbabilityRecord {
        times: times.to_vec(),
        values,
        tolerance: RANGE_TOLERANCE,
    })
}

fn series_value(psi: &WaveFunction, n: &LocalizationOperator) -> Result<f64> {
    clamp_probability(raw_probability(psi, n)?.1)
}

/// Confined when every sample is at most `tol`, spreading otherwise.
pub fn classify_dichotomy(record: &ProbabilityRecord, tol: f64) -> Result<DichotomyVerdict> {
    let samples = record.values.len();
    if samples < MIN_DICHOTOMY_SAMPLES {
        return Err(Error::invalid(format!(
            "dichotomy needs at least {MIN_DICHOTOMY_SAMPLES} samples, got {samples}"
        )));
    }
    if record.times.len() != samples {
        return Err(Error::DimensionMismatch("one time per value".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be non-negative"));
    }
    let nonzero: Vec<(f64, f64)> = record
        .times
        .iter()
        .zip(&record.values)
        .filter(|(_, v)| **v > tol)
        .map(|(t, v)| (*t, *v))
        .collect();
    let zero_fraction = (samples - nonzero.len()) as f64 / samples as f64;
    Ok(DichotomyVerdict {
        branch: if nonzero.is_empty() {
            Branch::Confined
        } else {
            Branch::Spreading
        },
        zero_fraction,
        support_evidence: SupportEvidence {
            samples,
            nonzero: nonzero.len(),
            first_nonzero_time: nonzero.first().map(|p| p.0),
            min_nonzero_value: nonzero.iter().map(|p| p.1).reduce(f64::min),
            max_value: record.values.iter().copied().fold(0.0, f64::max),
        },
    })
}

/// `int_{|x| > R} |psi_t|^2` for a free particle started in a state
/// supported inside `[-R, R]`.
pub fn tail_probability(line: &FreeLine, t: f64, radius: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("tail probability needs t >= 0"));
    }
    if !(radius > 0.0) {
        return Err(Error::invalid("radius must be positive"));
    }
    let psi0 = line.initial();
    let grid = psi0.grid();
    if radius >= grid.end().min(-grid.origin) {
        return Err(Error::invalid("radius reaches the edge of the embedding box"));
    }
    let (lo, hi) = support(psi0).ok_or_else(|| Error::invalid("zero initial state"))?;
    if lo < -radius || hi > radius {
        return Err(Error::invalid(format!("support [{lo}, {hi}] is not inside [-{radius}, {radius}]")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let psi = line.evolve(t)?;
    let values = psi.values();
    let outside = density_over(grid, values, grid.origin, -radius) + density_over(grid, values, radius, grid.end());
    let tail = outside / (outside + density_over(grid, values, -radius, radius));
    if tail <= NOISE_FLOOR {
        return Err(Error::ResolutionInsufficient {
            value: tail,
            floor: NOISE_FLOOR,
        });
    }
    Ok(tail)
}

/// Convenience form of [`tail_probability`] building the evolution itself.
pub fn tail_probability_of(psi0: &WaveFunction, t: f64, radius: f64, mass: f64) -> Result<f64> {
    tail_probability(&FreeLine::new(psi0, mass)?, t, radius)
}

/// Extent of the samples above the support threshold.
fn support(psi: &WaveFunction) -> Option<(f64, f64)> {
    let peak = psi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let grid = psi.grid();
    let inside = |v: &Complex64| v.norm() > SUPPORT_THRESHOLD * peak;
    let first = psi.values().iter().position(inside)?;
    let last = psi.values().iter().rposition(inside)?;
    Some((grid.x(first), grid.x(last)))
}

/// Sample `i` of the amplitude `f`, continued periodically on a periodic
/// grid. Amplitudes on a twisted grid pick up the boundary phase when the
/// stencil wraps.
fn stencil_value(grid: &GridSpec, f: &[Complex64], i: i64) -> Complex64 {
    if !grid.is_periodic() {
        return f[i as usize];
    }
    let n = grid.n as i64;
    let j = i.rem_euclid(n) as usize;
    let wraps = i.div_euclid(n);
    let twist = grid.twist();
    if wraps == 0 || twist == 0.0 {
        f[j]
    } else {
        f[j] * Complex64::new(0.0, -twist * wraps as f64).exp()
    }
}

/// Visit each cell overlapping `[a, b]` with the cubic through the four
/// nearest samples, given as a closure in the cell coordinate `s` (the cell
/// is `0 <= s <= 1`), together with the overlap `[s0, s1]`.
fn for_each_cell(grid: &GridSpec, f: &[Complex64], a: f64, b: f64, mut visit: impl FnMut(&dyn Fn(f64) -> Complex64, f64, f64)) {
    let n = grid.n;
    let h = grid.spacing();
    let periodic = grid.is_periodic();
    let cells = if periodic { n } else { n - 1 };
    let first = (((a - grid.origin) / h).floor().max(0.0)) as usize;
    let last = ((((b - grid.origin) / h).ceil()) as usize).min(cells);
    for i in first..last {
        let x0 = grid.origin + i as f64 * h;
        let (u0, u1) = (a.max(x0), b.min(x0 + h));
        if u1 <= u0 {
            continue;
        }
        // Stencil offset so that all four points exist.
        let start: i64 = if periodic {
            i as i64 - 1
        } else {
            (i as i64 - 1).clamp(0, n as i64 - 4)
        };
        let nodes: [f64; 4] = std::array::from_fn(|j| (start + j as i64 - i as i64) as f64);
        let vals: [Complex64; 4] = std::array::from_fn(|j| stencil_value(grid, f, start + j as i64));
        let cubic = |s: f64| {
            let mut p = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                let mut l = 1.0;
                for m in 0..4 {
                    if m != j {
                        l *= (s - nodes[m]) / (nodes[j] - nodes[m]);
                    }
                }
                p += vals[j] * l;
            }
            p
        };
        let s0 = if u0 == x0 { 0.0 } else { (u0 - x0) / h };
        let s1 = if u1 == x0 + h { 1.0 } else { (u1 - x0) / h };
        visit(&cubic, s0, s1);
    }
}

/// `int_a^b f` for an amplitude sampled on the grid, `[a, b]` inside the
/// domain. Exact for cubics on each cell, so ends may fall between points.
fn integrate_over(grid: &GridSpec, f: &[Complex64], a: f64, b: f64) -> Complex64 {
    let h = grid.spacing();
    let g = 0.577_350_269_189_625_8;
    let mut total = Complex64::new(0.0, 0.0);
    for_each_cell(grid, f, a, b, |p, s0, s1| {
        let (mid, half) = (0.5 * (s0 + s1), 0.5 * (s1 - s0));
        total += (p(mid - half * g) + p(mid + half * g)) * (half * h);
    });
    total
}

/// `int_a^b |P|^2` with `P` the cellwise cubic interpolant of the amplitude
/// `f`. Four-point Gauss is exact for the sextic, and the result is never
/// negative.
fn density_over(grid: &GridSpec, f: &[Complex64], a: f64, b: f64) -> f64 {
    if !(a < b) {
        return 0.0;
    }
    let h = grid.spacing();
    let (g1, g2) = (0.339_981_043_584_856_3, 0.861_136_311_594_052_6);
    let (w1, w2) = (0.652_145_154_862_546_2, 0.347_854_845_137_453_8);
    let mut total = 0.0;
    for_each_cell(grid, f, a, b, |p, s0, s1| {
        let (mid, half) = (0.5 * (s0 + s1), 0.5 * (s1 - s0));
        let sum = w1 * (p(mid - half * g1).norm_sqr() + p(mid + half * g1).norm_sqr())
            + w2 * (p(mid - half * g2).norm_sqr() + p(mid + half * g2).norm_sqr());
        total += sum * half * h;
    });
    total
}
