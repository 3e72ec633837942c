//! Ground state of the repulsive delta-Bose gas (Lieb-Liniger).
//!
//! The rapidity density on `[-1, 1]` solves
//!
//! ```text
//! g(x) = 1/(2 pi) + (1/pi) int_{-1}^{1} alpha g(y) / (alpha^2 + (x - y)^2) dy
//! ```
//!
//! and the coupling and energy follow as `gamma = alpha / int g` and
//! `f(gamma) = (gamma / alpha)^3 int g(x) x^2 dx`. The ground-state energy
//! per length at density `rho` and coupling `lambda` is
//! `e = rho^3 f(lambda / rho)`. Units: `hbar = 2 m0 = 1`, so the
//! impenetrable limit is `f -> pi^2 / 3`.
//!
//! The equation is the standard one from Lieb and Liniger (1963); it is
//! discretized by Nyström on Gauss-Legendre nodes and `alpha` is found by
//! Brent's method on `gamma(alpha) - gamma`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::numerics::{brent, gauss_legendre, Bracket};
use crate::{Error, Result};

/// Smallest coupling accepted.
pub const MIN_GAMMA: f64 = 1e-3;
/// Smallest Nyström order accepted.
pub const MIN_NODES: usize = 64;
/// Relative tolerance on the coupling condition.
pub const GAMMA_TOLERANCE: f64 = 1e-10;
/// Largest allowed residual of the discretized equation.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LLSolution {
    pub gamma: f64,
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub g: Vec<f64>,
    pub f_gamma: f64,
    /// Largest residual of the discrete equation at the nodes.
    pub residual: f64,
}

impl LLSolution {
    /// `int g`.
    pub fn density_integral(&self) -> f64 {
        self.g.iter().zip(&self.weights).map(|(g, w)| g * w).sum()
    }

    /// `g` anywhere in `[-1, 1]` by the Nyström interpolant.
    pub fn g_at(&self, x: f64) -> f64 {
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.g)
            .map(|((y, w), g)| w * kernel(self.alpha, x, *y) * g)
            .sum();
        0.5 / PI + s / PI
    }
}

fn kernel(alpha: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    alpha / (alpha * alpha + d * d)
}

struct Discrete {
    g: Vec<f64>,
    residual: f64,
}

fn solve_density(alpha: f64, nodes: &[f64], weights: &[f64]) -> Result<Discrete> {
    let n = nodes.len();
    let a = DMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - weights[j] * kernel(alpha, nodes[i], nodes[j]) / PI
    });
    let rhs = DVector::from_element(n, 0.5 / PI);
    let g = a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IterationFailed(format!("singular Nyström system at alpha = {alpha}")))?;
    let residual = (&a * &g - &rhs).amax();
    Ok(Discrete {
        g: g.iter().copied().collect(),
        residual,
    })
}

fn gamma_of(alpha: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    match solve_density(alpha, nodes, weights) {
        Ok(d) => alpha / d.g.iter().zip(weights).map(|(g, w)| g * w).sum::<f64>(),
        Err(_) => f64::NAN,
    }
}

/// Solve for the density at coupling `gamma` with `n_nodes` Gauss-Legendre
/// nodes.
pub fn solve_ll(gamma: f64, n_nodes: usize) -> Result<LLSolution> {
    if !(gamma >= MIN_GAMMA && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be finite and at least {MIN_GAMMA}, got {gamma}")));
    }
    if n_nodes < MIN_NODES {
        return Err(Error::invalid(format!("need at least {MIN_NODES} nodes, got {n_nodes}")));
    }
    let (nodes, weights) = gauss_legendre(n_nodes);
    let residual = |alpha: f64| gamma_of(alpha, &nodes, &weights) - gamma;
    // int g >= 1/pi, so gamma(alpha) <= pi alpha and the root lies above
    // gamma/pi. Far below the node spacing the kernel is unresolved and the
    // discrete residual can change sign spuriously, so the bracket is found
    // from above: double until positive, then halve until not.
    let floor = gamma / PI;
    let mut hi = (2.0 * floor).max(1.0);
    let mut r_hi = residual(hi);
    let mut steps = 0;
    while !(r_hi > 0.0) {
        if steps == 200 || r_hi.is_nan() {
            return Err(Error::IterationFailed(format!("no bracket for alpha at gamma = {gamma}")));
        }
        hi *= 2.0;
        r_hi = residual(hi);
        steps += 1;
    }
    let mut lo = 0.5 * hi;
    let mut r_lo = residual(lo);
    while r_lo > 0.0 {
        if lo < floor || steps == 400 {
            return Err(Error::IterationFailed(format!("no bracket for alpha at gamma = {gamma}")));
        }
        hi = lo;
        r_hi = r_lo;
        lo *= 0.5;
        r_lo = residual(lo);
        steps += 1;
    }
    if r_lo.is_nan() {
        return Err(Error::IterationFailed(format!("no bracket for alpha at gamma = {gamma}")));
    }
    let alpha = if r_lo == 0.0 {
        lo
    } else {
        let bracket = Bracket::new(lo, hi, r_lo, r_hi)?;
        brent(&residual, bracket, 1e-15 * hi)
    };
    let mismatch = residual(alpha).abs() / gamma;
    if !(mismatch <= GAMMA_TOLERANCE) {
        return Err(Error::IterationFailed(format!(
            "coupling condition off by {mismatch:e} relative at gamma = {gamma}"
        )));
    }
    let d = solve_density(alpha, &nodes, &weights)?;
    if !(d.residual < RESIDUAL_TOLERANCE) {
        return Err(Error::IterationFailed(format!("Nyström residual {:e}", d.residual)));
    }
    let second: f64 = d.g.iter().zip(&weights).zip(&nodes).map(|((g, w), x)| g * w * x * x).sum();
    let ratio = gamma / alpha;
    let n = nodes.len();
    let asymmetry = (0..n).map(|i| (d.g[i] - d.g[n - 1 - i]).abs()).fold(0.0, f64::max);
    if asymmetry > 1e-12 * d.g.iter().copied().fold(0.0, f64::max) {
        return Err(Error::Assertion(format!("density not even: {asymmetry:e}")));
    }
    Ok(LLSolution {
        gamma,
        alpha,
        nodes,
        weights,
        g: d.g,
        f_gamma: ratio.powi(3) * second,
        residual: d.residual,
    })
}

/// `e(rho) = rho^3 f(lambda / rho)`.
pub fn energy_density(lambda: f64, rho: f64, n_nodes: usize) -> Result<f64> {
    if !(lambda > 0.0 && rho > 0.0 && lambda.is_finite() && rho.is_finite()) {
        return Err(Error::invalid("lambda and rho must be finite and positive"));
    }
    Ok(rho.powi(3) * solve_ll(lambda / rho, n_nodes)?.f_gamma)
}

/// `|f(lambda/rho1) - e(lambda, rho1)/rho1^3| + |f(lambda/rho2) - e(lambda, rho2)/rho2^3|`.
pub fn scaling_residual(lambda: f64, rho1: f64, rho2: f64, n_nodes: usize) -> Result<f64> {
    if rho1 == rho2 {
        return Err(Error::invalid("scaling residual needs two different densities"));
    }
    let mut total = 0.0;
    for rho in [rho1, rho2] {
        let f = solve_ll(lambda / rho, n_nodes)?.f_gamma;
        total += (f - energy_density(lambda, rho, n_nodes)? / rho.powi(3)).abs();
    }
    Ok(total)
}
