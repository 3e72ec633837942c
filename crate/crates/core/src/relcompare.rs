//! Free relativistic versus nonrelativistic fields as `c -> inf`.
//!
//! The vacuum two-point functions of the two zero-time fields differ by their
//! momentum kernels, `1/(2 m0)` against `c^2 / (2 omega_k)` with
//! `omega_k = sqrt(c^2 k^2 + m0^2 c^4)`. For smearing functions whose
//! momentum content above `m0 c delta` carries weight below `epsilon`, the
//! time-dependent correlators differ by at most
//! `(2 epsilon + delta^2/2 + |tau| m0 c^2 delta^4 / 8) / (2 m0)`. This module
//! evaluates both sides of that bound and the `c^{-2}` approach of the two
//! kernels. Kernel differences are written in cancellation-free form so
//! the scan stays accurate out to `c = 1e6`.
//!
//! Test functions are isotropic: each is a radial momentum profile in
//! dimension 1 or 3, with `f~(k) = (2 pi)^{-d/2} int f(x) e^{-ikx} dx`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::numerics::{gauss_legendre, integrate_1d, Integral, Interval, QuadratureSpec};
use crate::{Error, Result};

/// Rest mass and speed of light, both finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionParams {
    pub m0: f64,
    pub c: f64,
}

impl DispersionParams {
    pub fn new(m0: f64, c: f64) -> Result<Self> {
        if !(m0 > 0.0 && m0.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!("need finite positive m0 and c, got m0={m0}, c={c}")));
        }
        Ok(DispersionParams { m0, c })
    }

    pub fn rest_energy(&self) -> f64 {
        self.m0 * self.c * self.c
    }

    /// `(k / (m0 c))^2`.
    fn y(&self, k: f64) -> f64 {
        let u = k / (self.m0 * self.c);
        u * u
    }
}

/// `omega_k = sqrt(c^2 k^2 + m0^2 c^4)`.
pub fn omega_c(k: f64, p: &DispersionParams) -> f64 {
    p.rest_energy() * (1.0 + p.y(k)).sqrt()
}

/// `omega_k - m0 c^2`, without cancellation.
pub fn kinetic_relativistic(k: f64, p: &DispersionParams) -> f64 {
    let y = p.y(k);
    p.rest_energy() * y / (1.0 + (1.0 + y).sqrt())
}

/// `(K_nr, K_r) = (1/(2 m0), c^2 / (2 omega_k))`.
pub fn kernel_pair(k: f64, p: &DispersionParams) -> (f64, f64) {
    let k_nr = 0.5 / p.m0;
    (k_nr, k_nr / (1.0 + p.y(k)).sqrt())
}

/// `K_nr - K_r`, without cancellation.
pub fn kernel_gap(k: f64, p: &DispersionParams) -> f64 {
    let y = p.y(k);
    let s = (1.0 + y).sqrt();
    0.5 / p.m0 * y / (s * (1.0 + s))
}

/// `k^2/(2 m0) - (omega_k - m0 c^2) = m0 c^2 y^2 / (2 (1 + sqrt(1+y))^2)`.
fn phase_gap(k: f64, p: &DispersionParams) -> f64 {
    let y = p.y(k);
    let s = 1.0 + (1.0 + y).sqrt();
    p.rest_energy() * y * y / (2.0 * s * s)
}

/// `beta = K_nr e^{-i tau k^2/2m0} - K_r e^{-i tau (omega_k - m0 c^2)}`.
pub fn beta(k: f64, tau: f64, p: &DispersionParams) -> Complex64 {
    let (_, k_r) = kernel_pair(k, p);
    let a = 0.5 * k * k / p.m0;
    let lead = Complex64::new(0.0, -tau * a).exp();
    // 1 - e^{i phi} = -2i sin(phi/2) e^{i phi/2}
    let phi = tau * phase_gap(k, p);
    let one_minus = Complex64::new(0.0, -2.0 * (0.5 * phi).sin()) * Complex64::new(0.0, 0.5 * phi).exp();
    lead * (kernel_gap(k, p) + k_r * one_minus)
}

/// Sampled radial momentum profile, interpolated by monotone cubic Hermite
/// segments and zero beyond the last node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialTable {
    pub k: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialTable {
    pub fn new(k: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if k.len() != values.len() || k.len() < 4 {
            return Err(Error::invalid("radial table needs at least 4 (k, value) pairs of equal length"));
        }
        if k[0] != 0.0 || k.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("radial table nodes must start at 0 and increase strictly"));
        }
        if values.iter().chain(&k).any(|v| !v.is_finite()) {
            return Err(Error::invalid("radial table entries must be finite"));
        }
        Ok(RadialTable { k, values })
    }

    // Three-point slopes, set to zero at local extrema and where a
    // neighbouring segment is flat, and capped to keep each segment monotone.
    fn slope(&self, i: usize) -> f64 {
        let n = self.k.len();
        let secant = |j: usize| (self.values[j + 1] - self.values[j]) / (self.k[j + 1] - self.k[j]);
        if i == 0 {
            // Radial profiles are even in k.
            0.0
        } else if i == n - 1 {
            secant(i - 1)
        } else {
            let (a, b) = (secant(i - 1), secant(i));
            if a * b <= 0.0 {
                return 0.0;
            }
            let (ha, hb) = (self.k[i] - self.k[i - 1], self.k[i + 1] - self.k[i]);
            let centred = (hb * a + ha * b) / (ha + hb);
            let cap = 3.0 * a.abs().min(b.abs());
            centred.clamp(-cap, cap)
        }
    }

    pub fn eval(&self, k: f64) -> f64 {
        let k = k.abs();
        let n = self.k.len();
        if k > self.k[n - 1] {
            return 0.0;
        }
        let i = match self.k.partition_point(|x| *x <= k) {
            0 => 0,
            j if j >= n => n - 2,
            j => j - 1,
        };
        let h = self.k[i + 1] - self.k[i];
        let t = (k - self.k[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.values[i]
            + (t3 - 2.0 * t2 + t) * h * self.slope(i)
            + (-2.0 * t3 + 3.0 * t2) * self.values[i + 1]
            + (t3 - t2) * h * self.slope(i + 1)
    }

    fn cutoff(&self) -> f64 {
        *self.k.last().expect("table is nonempty")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TestKind {
    /// `f~(k) = (w^2/pi)^{d/4} e^{-k^2 w^2 / 2}`, unit norm.
    Gaussian { width: f64 },
    /// `f(x) = N exp(-1 / (1 - |x|^2/r^2))` for `|x| < r`, unit norm.
    Bump { radius: f64 },
    TabulatedRadial(RadialTable),
}

/// Isotropic smearing function on `R^d`, `d` in {1, 3}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    pub kind: TestKind,
    pub dimension: usize,
    /// Overall factor applied to the unit-norm profile.
    pub scale: f64,
    // Position-space normalization of a bump.
    #[serde(skip)]
    bump_norm: f64,
}

// Bump transforms beyond this k r are below 1e-25 and not evaluated.
const BUMP_KR_CUTOFF: f64 = 4000.0;

impl TestFunction {
    pub fn gaussian(width: f64, dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid("gaussian width must be positive"));
        }
        Ok(TestFunction {
            kind: TestKind::Gaussian { width },
            dimension,
            scale: 1.0,
            bump_norm: 1.0,
        })
    }

    pub fn bump(radius: f64, dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("bump radius must be positive"));
        }
        let mut f = TestFunction {
            kind: TestKind::Bump { radius },
            dimension,
            scale: 1.0,
            bump_norm: 1.0,
        };
        let raw = f.position_norm_sq(&QuadratureSpec::default())?.expect("bump has a position profile");
        f.bump_norm = 1.0 / raw.sqrt();
        Ok(f)
    }

    pub fn tabulated(table: RadialTable, dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(TestFunction {
            kind: TestKind::TabulatedRadial(table),
            dimension,
            scale: 1.0,
            bump_norm: 1.0,
        })
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    /// Radial momentum profile `f~(|k|)`.
    pub fn fourier(&self, k: f64) -> f64 {
        let k = k.abs();
        let d = self.dimension as i32;
        self.scale
            * match &self.kind {
                TestKind::Gaussian { width } => {
                    (width * width / PI).powf(0.25 * d as f64) * (-0.5 * k * k * width * width).exp()
                }
                TestKind::Bump { radius } => self.bump_norm * bump_transform(*radius, self.dimension, k),
                TestKind::TabulatedRadial(t) => t.eval(k),
            }
    }

    /// Radial position profile `f(|x|)`, where known.
    pub fn position(&self, r: f64) -> Option<f64> {
        let r = r.abs();
        let d = self.dimension as f64;
        match &self.kind {
            TestKind::Gaussian { width } => {
                Some(self.scale * (PI * width * width).powf(-0.25 * d) * (-0.5 * r * r / (width * width)).exp())
            }
            TestKind::Bump { radius } => Some(self.scale * self.bump_norm * bump_profile(r / radius)),
            TestKind::TabulatedRadial(_) => None,
        }
    }

    /// Largest momentum at which the profile can be nonzero.
    fn momentum_cutoff(&self) -> Option<f64> {
        match &self.kind {
            TestKind::Gaussian { .. } => None,
            TestKind::Bump { radius } => Some(BUMP_KR_CUTOFF / radius),
            TestKind::TabulatedRadial(t) => Some(t.cutoff()),
        }
    }

    /// `int |f~|^2 d^dk`.
    pub fn momentum_norm_sq(&self, quad: &QuadratureSpec) -> Result<f64> {
        Ok(overlap(self, self, |_| 1.0, quad)?.value.re)
    }

    /// `int |f|^2 d^dx`, or `None` for tabulated profiles.
    pub fn position_norm_sq(&self, quad: &QuadratureSpec) -> Result<Option<f64>> {
        let d = self.dimension;
        let g = |r: f64| {
            let f = self.position(r).unwrap_or(0.0);
            Complex64::new(f * f * radial_measure(d, r), 0.0)
        };
        let value = match &self.kind {
            TestKind::Gaussian { .. } => integrate_1d(g, Interval::UpperHalf(0.0), quad)?.value.re,
            TestKind::Bump { radius } => integrate_1d(g, Interval::Finite(0.0, *radius), quad)?.value.re,
            TestKind::TabulatedRadial(_) => return Ok(None),
        };
        Ok(Some(value))
    }

    /// `|int |f~|^2 d^dk - int |f|^2 d^dx|`, or `None` without a position
    /// profile.
    pub fn parseval_defect(&self, quad: &QuadratureSpec) -> Result<Option<f64>> {
        match self.position_norm_sq(quad)? {
            Some(x) => Ok(Some((self.momentum_norm_sq(quad)? - x).abs())),
            None => Ok(None),
        }
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d == 1 || d == 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!("dimension must be 1 or 3, got {d}")))
    }
}

/// Surface factor of the radial measure: `2` in one dimension, `4 pi r^2` in three.
fn radial_measure(d: usize, r: f64) -> f64 {
    if d == 1 {
        2.0
    } else {
        4.0 * PI * r * r
    }
}

fn bump_profile(u: f64) -> f64 {
    if u < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

// Radial Fourier transform of the unnormalized bump by composite
// Gauss-Legendre, with panels scaled to the oscillation count.
fn bump_transform(radius: f64, d: usize, k: f64) -> f64 {
    let kr = k * radius;
    if kr > BUMP_KR_CUTOFF {
        return 0.0;
    }
    thread_local! {
        static NODES: (Vec<f64>, Vec<f64>) = gauss_legendre(16);
    }
    let panels = 16usize.max((kr / 2.0).ceil() as usize);
    let h = radius / panels as f64;
    NODES.with(|(xs, ws)| {
        let mut sum = 0.0;
        for p in 0..panels {
            let a = p as f64 * h;
            for (x, w) in xs.iter().zip(ws) {
                let r = a + 0.5 * h * (x + 1.0);
                let f = bump_profile(r / radius);
                let kernel = if d == 1 {
                    2.0 * (k * r).cos()
                } else if k == 0.0 {
                    4.0 * PI * r * r
                } else {
                    4.0 * PI * r * (k * r).sin() / k
                };
                sum += w * 0.5 * h * f * kernel;
            }
        }
        sum * (2.0 * PI).powf(-0.5 * d as f64)
    })
}

/// `int_{|k| >= k_min} g(|k|) d^dk` for an isotropic integrand, integrated
/// up to `k_max` when given.
pub fn momentum_integral<G>(
    dimension: usize,
    g: G,
    k_min: f64,
    k_max: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Integral>
where
    G: Fn(f64) -> Complex64,
{
    check_dimension(dimension)?;
    let integrand = |k: f64| g(k) * radial_measure(dimension, k);
    match k_max {
        Some(hi) if hi <= k_min => Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            subdivisions: 0,
        }),
        Some(hi) => integrate_1d(integrand, Interval::Finite(k_min, hi), quad),
        None => integrate_1d(integrand, Interval::UpperHalf(k_min), quad),
    }
}

/// `int conj(f~1) f~2 w(k) d^dk`.
pub fn overlap<W>(f1: &TestFunction, f2: &TestFunction, weight: W, quad: &QuadratureSpec) -> Result<Integral>
where
    W: Fn(f64) -> f64,
{
    if f1.dimension != f2.dimension {
        return Err(Error::DimensionMismatch(format!(
            "test functions in {} and {} dimensions",
            f1.dimension, f2.dimension
        )));
    }
    let k_max = match (f1.momentum_cutoff(), f2.momentum_cutoff()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    momentum_integral(
        f1.dimension,
        |k| Complex64::new(f1.fourier(k) * f2.fourier(k) * weight(k), 0.0),
        0.0,
        k_max,
        quad,
    )
}

/// Which form of the correlator difference to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CorrelatorForm {
    /// `|int conj(f~1) f~2 beta d^dk|`, the momentum form of the difference
    /// of the two vacuum correlators.
    #[default]
    Sesquilinear,
    /// `|int (f~1 - f~2) beta' d^dk|` with the relativistic kernel `c^2/omega`
    /// (no factor 1/2). Kept for comparison only; it is not a difference of
    /// two-point functions and vanishes for `f1 = f2`.
    AsPrinted,
}

/// `Delta C` for two test functions at time difference `tau`.
pub fn delta_c(
    f1: &TestFunction,
    f2: &TestFunction,
    tau: f64,
    p: &DispersionParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    delta_c_with(f1, f2, tau, p, quad, CorrelatorForm::Sesquilinear)
}

pub fn delta_c_with(
    f1: &TestFunction,
    f2: &TestFunction,
    tau: f64,
    p: &DispersionParams,
    quad: &QuadratureSpec,
    form: CorrelatorForm,
) -> Result<f64> {
    if f1.dimension != f2.dimension {
        return Err(Error::DimensionMismatch("test functions differ in dimension".into()));
    }
    if !tau.is_finite() {
        return Err(Error::invalid("tau must be finite"));
    }
    let k_max = match (f1.momentum_cutoff(), f2.momentum_cutoff()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let value = match form {
        CorrelatorForm::Sesquilinear => momentum_integral(
            f1.dimension,
            |k| beta(k, tau, p) * (f1.fourier(k) * f2.fourier(k)),
            0.0,
            k_max,
            quad,
        )?,
        CorrelatorForm::AsPrinted => {
            let k_max = match (f1.momentum_cutoff(), f2.momentum_cutoff()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            momentum_integral(
                f1.dimension,
                |k| {
                    let (k_nr, k_r) = kernel_pair(k, p);
                    let a = 0.5 * k * k / p.m0;
                    let b = kinetic_relativistic(k, p);
                    let printed = Complex64::new(0.0, -tau * a).exp() * k_nr
                        - Complex64::new(0.0, -tau * b).exp() * (2.0 * k_r);
                    printed * (f1.fourier(k) - f2.fourier(k))
                },
                0.0,
                k_max,
                quad,
            )?
        }
    };
    Ok(value.value.norm())
}

/// `int_{|k| > m0 c delta} |f~|^2 d^dk`, the smallest admissible `epsilon`.
pub fn epsilon_for_delta(f: &TestFunction, delta: f64, p: &DispersionParams, quad: &QuadratureSpec) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    if delta == f64::INFINITY {
        return Ok(0.0);
    }
    let threshold = p.m0 * p.c * delta;
    let v = momentum_integral(
        f.dimension,
        |k| Complex64::new(f.fourier(k).powi(2), 0.0),
        threshold,
        f.momentum_cutoff(),
        quad,
    )?;
    Ok(v.value.re.max(0.0))
}

/// Both sides of the correlator bound for one `(delta, c, tau)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub delta: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub m0: f64,
    pub c: f64,
    pub delta_c: f64,
    /// `2 m0 Delta C`.
    pub lhs: f64,
    /// `2 epsilon + delta^2/2 + |tau| m0 c^2 delta^4 / 8`, with `hbar = 1`.
    pub rhs: f64,
    pub pass: bool,
    pub margin: f64,
}

/// Evaluate the bound with `epsilon` the larger momentum tail of `f1`, `f2`.
pub fn verify_lemma2(
    f1: &TestFunction,
    f2: &TestFunction,
    tau: f64,
    delta: f64,
    p: &DispersionParams,
    quad: &QuadratureSpec,
) -> Result<Lemma2Report> {
    let epsilon = epsilon_for_delta(f1, delta, p, quad)?.max(epsilon_for_delta(f2, delta, p, quad)?);
    let dc = delta_c(f1, f2, tau, p, quad)?;
    let lhs = 2.0 * p.m0 * dc;
    let rhs = 2.0 * epsilon + 0.5 * delta * delta + tau.abs() * p.rest_energy() * delta.powi(4) / 8.0;
    Ok(Lemma2Report {
        delta,
        epsilon,
        tau,
        m0: p.m0,
        c: p.c,
        delta_c: dc,
        lhs,
        rhs,
        pass: lhs <= rhs,
        margin: rhs - lhs,
    })
}

/// Worst cases of the three pointwise inequalities behind the bound, on
/// `n` equally spaced momenta in `[0, m0 c delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub points: usize,
    /// Violations of `K_nr - K_r <= delta^2 / (4 m0)`.
    pub kernel_gap_violations: usize,
    /// Violations of `|e^{-i tau k^2/2m0} - e^{-i tau (omega - m0 c^2)}| <= m0 c^2 |tau| delta^4 / 8`.
    pub phase_violations: usize,
    /// Violations of `K_r <= K_nr`.
    pub ordering_violations: usize,
    /// Smallest slack over the three inequalities.
    pub min_slack: f64,
}

pub fn pointwise_inequalities(p: &DispersionParams, delta: f64, tau: f64, n: usize) -> Result<InequalityReport> {
    if n < 2 || !(delta > 0.0) {
        return Err(Error::invalid("need at least 2 points and delta > 0"));
    }
    let k_top = p.m0 * p.c * delta;
    let gap_bound = delta * delta / (4.0 * p.m0);
    let phase_bound = p.rest_energy() * tau.abs() * delta.powi(4) / 8.0;
    let mut report = InequalityReport {
        points: n,
        kernel_gap_violations: 0,
        phase_violations: 0,
        ordering_violations: 0,
        min_slack: f64::INFINITY,
    };
    for i in 0..n {
        let k = k_top * i as f64 / (n - 1) as f64;
        let (k_nr, k_r) = kernel_pair(k, p);
        let gap = kernel_gap(k, p);
        let phase = 2.0 * (0.5 * tau * phase_gap(k, p)).sin().abs();
        let slacks = [gap_bound - gap, phase_bound - phase, k_nr - k_r];
        report.kernel_gap_violations += (slacks[0] < 0.0) as usize;
        report.phase_violations += (slacks[1] < 0.0) as usize;
        report.ordering_violations += (slacks[2] < 0.0) as usize;
        report.min_slack = slacks.iter().copied().fold(report.min_slack, f64::min);
    }
    Ok(report)
}

/// `Delta C` along a list of speeds with the fitted log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceScan {
    pub c: Vec<f64>,
    pub delta_c: Vec<f64>,
    pub slope: f64,
}

pub fn convergence_scan(
    f1: &TestFunction,
    f2: &TestFunction,
    tau: f64,
    c_list: &[f64],
    m0: f64,
    quad: &QuadratureSpec,
) -> Result<ConvergenceScan> {
    if c_list.len() < 4 {
        return Err(Error::invalid("convergence scan needs at least 4 speeds"));
    }
    if c_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("speeds must increase strictly"));
    }
    if c_list[c_list.len() - 1] / c_list[0] < 100.0 {
        return Err(Error::invalid("speeds must span at least two decades"));
    }
    let delta_c = c_list
        .iter()
        .map(|&c| delta_c(f1, f2, tau, &DispersionParams::new(m0, c)?, quad))
        .collect::<Result<Vec<_>>>()?;
    if delta_c.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("Delta C vanishes; no slope to fit"));
    }
    let xs: Vec<f64> = c_list.iter().map(|c| c.ln()).collect();
    let ys: Vec<f64> = delta_c.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ConvergenceScan {
        c: c_list.to_vec(),
        delta_c,
        slope: sxy / sxx,
    })
}

/// Smeared kernel discrepancy `int |f~|^2 (K_nr - K_r) d^dk` with its
/// quadrature error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MismatchCertificate {
    pub value: f64,
    pub error: f64,
    /// Set when the momentum content sits at `k = 0`, where the kernels
    /// agree, so a vanishing value says nothing about finite `c`.
    pub degenerate: bool,
}

pub fn kernel_mismatch_certificate(
    p: &DispersionParams,
    f: &TestFunction,
    quad: &QuadratureSpec,
) -> Result<MismatchCertificate> {
    let g = |k: f64| Complex64::new(f.fourier(k).powi(2) * kernel_gap(k, p), 0.0);
    let r = momentum_integral(f.dimension, g, 0.0, f.momentum_cutoff(), quad)?;
    let second_moment = momentum_integral(
        f.dimension,
        |k| Complex64::new(f.fourier(k).powi(2) * k * k, 0.0),
        0.0,
        f.momentum_cutoff(),
        quad,
    )?;
    Ok(MismatchCertificate {
        value: r.value.re,
        error: r.error,
        degenerate: !(second_moment.value.re > second_moment.error) || !(r.value.re > r.error),
    })
}
