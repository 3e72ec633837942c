//! Truncated bosonic Fock space and smeared zero-time fields.
//!
//! Each mode carries occupations `0..=D`. Smeared fields are built from
//! ladder operators so that the canonical relation
//! `[Phi(f), Pi(g)] = i (f, g)` holds for real `f`, `g` away from the cutoff:
//!
//! ```text
//! Phi(f) = (2 m0)^{-1/2} (a(f) + a*(f))
//! Pi(g)  = i (m0 / 2)^{1/2} (a*(g) - a(g))
//! a(f)   = (m0 / 2)^{1/2} Phi(f) + i (2 m0)^{-1/2} Pi(f)
//! ```
//!
//! With these conventions the exponentiated relation reads
//! `e^{i Pi(f)} e^{i Phi(g)} = e^{i Phi(g)} e^{i Pi(f)} e^{+i (f, g)}`.
//!
//! The relativistic fields replace `f~` by `f~ c / sqrt(2 omega_k)` in `Phi`
//! and `g~` by `g~ sqrt(2 omega_k) / (2 c)` in `Pi`. Those weighted functions
//! span a different subspace of one-particle space than the bare modes, so
//! the Fock modes used for them are an orthonormal basis of that weighted
//! span, found from its Gram matrix.
//!
//! Smearing functions are given as real coefficient vectors over an
//! orthonormal [`ModeBasis`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::numerics::{CMatrix, QuadratureSpec};
use crate::relcompare::{kinetic_relativistic, omega_c, overlap, DispersionParams, TestFunction};
use crate::{Error, Result};

/// Largest Fock space dimension `(D + 1)^modes`.
pub const MAX_DIMENSION: usize = 4096;
/// Tolerance on the Gram matrix of an orthonormalized basis.
pub const GRAM_TOLERANCE: f64 = 1e-10;
/// Largest norm defect `||f||^2 - sum c_i^2` accepted when expanding a
/// function over a basis.
pub const SPAN_TOLERANCE: f64 = 1e-8;
// Amplitudes below this count as zero when locating a state's occupations.
const OCCUPATION_FLOOR: f64 = 1e-14;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Single-mode ladder pair `(a, a*)` on occupations `0..=D`, with
/// `a[n-1, n] = sqrt(n)`.
pub fn build_ladder(cutoff: usize) -> Result<(CMatrix, CMatrix)> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff D must be at least 1"));
    }
    let mut a = CMatrix::zeros(cutoff + 1, cutoff + 1);
    for n in 1..=cutoff {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Tensor product of `n_modes` truncated oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncatedFock {
    pub n_modes: usize,
    pub cutoff: usize,
    pub dimension: usize,
}

impl TruncatedFock {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("need at least one mode"));
        }
        if cutoff < 1 {
            return Err(Error::invalid("cutoff D must be at least 1"));
        }
        let dimension = (0..n_modes)
            .try_fold(1usize, |acc, _| acc.checked_mul(cutoff + 1))
            .filter(|d| *d <= MAX_DIMENSION)
            .ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "(D+1)^modes = {}^{n_modes} exceeds {MAX_DIMENSION}",
                    cutoff + 1
                ))
            })?;
        Ok(TruncatedFock {
            n_modes,
            cutoff,
            dimension,
        })
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow(mode as u32)
    }

    /// Occupation of `mode` in basis state `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % (self.cutoff + 1)
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.n_modes).map(|j| self.occupation(index, j)).collect()
    }

    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.n_modes || occupations.iter().any(|n| *n > self.cutoff) {
            return Err(Error::invalid(format!("occupations {occupations:?} not in the truncation")));
        }
        Ok(occupations.iter().enumerate().map(|(j, n)| n * self.stride(j)).sum())
    }

    pub fn basis_state(&self, occupations: &[usize]) -> Result<Vec<Complex64>> {
        let mut v = vec![c(0.0); self.dimension];
        v[self.index_of(occupations)?] = c(1.0);
        Ok(v)
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![c(0.0); self.dimension];
        v[0] = c(1.0);
        v
    }

    fn check_state(&self, psi: &[Complex64]) -> Result<()> {
        if psi.len() != self.dimension {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} in a {}-dimensional space",
                psi.len(),
                self.dimension
            )));
        }
        Ok(())
    }

    /// `a_j psi`.
    pub fn lower(&self, mode: usize, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_state(psi)?;
        let stride = self.stride(mode);
        let mut out = vec![c(0.0); self.dimension];
        for (i, v) in psi.iter().enumerate() {
            let n = self.occupation(i, mode);
            if n > 0 {
                out[i - stride] += v * (n as f64).sqrt();
            }
        }
        Ok(out)
    }

    /// `a*_j psi`, dropping what would leave the truncation.
    pub fn raise(&self, mode: usize, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_state(psi)?;
        let stride = self.stride(mode);
        let mut out = vec![c(0.0); self.dimension];
        for (i, v) in psi.iter().enumerate() {
            let n = self.occupation(i, mode);
            if n < self.cutoff {
                out[i + stride] += v * ((n + 1) as f64).sqrt();
            }
        }
        Ok(out)
    }

    /// Dense `a_j`.
    pub fn annihilator(&self, mode: usize) -> CMatrix {
        let stride = self.stride(mode);
        let mut a = CMatrix::zeros(self.dimension, self.dimension);
        for i in 0..self.dimension {
            let n = self.occupation(i, mode);
            if n > 0 {
                a[(i - stride, i)] = c((n as f64).sqrt());
            }
        }
        a
    }

    pub fn number_operator(&self) -> NumberOperator {
        NumberOperator {
            diagonal: (0..self.dimension)
                .map(|i| self.occupations(i).iter().sum::<usize>() as f64)
                .collect(),
        }
    }

    /// `sum_ij h_ij a*_i a_j` for a one-body matrix `h`.
    pub fn quadratic(&self, h: &DMatrix<f64>) -> Result<CMatrix> {
        if h.nrows() != self.n_modes || h.ncols() != self.n_modes {
            return Err(Error::DimensionMismatch("one-body matrix size differs from mode count".into()));
        }
        let ladders: Vec<CMatrix> = (0..self.n_modes).map(|j| self.annihilator(j)).collect();
        let mut out = CMatrix::zeros(self.dimension, self.dimension);
        for i in 0..self.n_modes {
            for j in 0..self.n_modes {
                if h[(i, j)] != 0.0 {
                    out += ladders[i].adjoint() * &ladders[j] * c(h[(i, j)]);
                }
            }
        }
        Ok(out)
    }

    /// Largest occupation of any mode among basis states carrying
    /// amplitude above the floor, with the weight found at that level.
    pub fn occupation_reach(&self, psi: &[Complex64]) -> Result<(usize, f64)> {
        self.check_state(psi)?;
        let mut reach = (0, 0.0);
        for (i, v) in psi.iter().enumerate() {
            if v.norm() <= OCCUPATION_FLOOR {
                continue;
            }
            let top = self.occupations(i).into_iter().max().unwrap_or(0);
            if top > reach.0 {
                reach = (top, v.norm_sqr());
            } else if top == reach.0 {
                reach.1 += v.norm_sqr();
            }
        }
        Ok(reach)
    }

    /// Product of single-mode coherent states `|alpha_j>`, cut at `D` and
    /// renormalized.
    pub fn coherent_state(&self, alphas: &[Complex64]) -> Result<Vec<Complex64>> {
        if alphas.len() != self.n_modes {
            return Err(Error::DimensionMismatch("one amplitude per mode".into()));
        }
        let single: Vec<Vec<Complex64>> = alphas
            .iter()
            .map(|alpha| {
                let mut amp = Vec::with_capacity(self.cutoff + 1);
                let mut term = c(1.0);
                for n in 0..=self.cutoff {
                    if n > 0 {
                        term = term * alpha / (n as f64).sqrt();
                    }
                    amp.push(term);
                }
                amp
            })
            .collect();
        let mut psi: Vec<Complex64> = (0..self.dimension)
            .map(|i| (0..self.n_modes).map(|j| single[j][self.occupation(i, j)]).product())
            .collect();
        let norm = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|v| *v /= norm);
        Ok(psi)
    }
}

/// Total occupation `N = sum_j a*_j a_j`, diagonal in the occupation basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberOperator {
    pub diagonal: Vec<f64>,
}

impl NumberOperator {
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.diagonal.len(),
            self.diagonal.iter().map(|d| c(*d)),
        ))
    }

    /// Distinct eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut s = self.diagonal.clone();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }
}

/// Orthonormal one-particle modes built from isotropic test functions.
///
/// The functions are orthonormalized through the eigen-decomposition of
/// their momentum-space Gram matrix; `transform` expresses each orthonormal
/// mode in terms of the input functions.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    functions: Vec<TestFunction>,
    transform: DMatrix<f64>,
    pub m0: f64,
    /// Finite speed of light, or `None` for the nonrelativistic theory.
    pub c: Option<f64>,
    quad: QuadratureSpec,
    /// `max |G_ij - delta_ij|` of the orthonormalized modes.
    pub gram_residual: f64,
}

impl ModeBasis {
    pub fn new(functions: Vec<TestFunction>, m0: f64, c: Option<f64>, quad: QuadratureSpec) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::invalid("mode basis needs at least one function"));
        }
        if !(m0 > 0.0 && m0.is_finite()) {
            return Err(Error::invalid("m0 must be finite and positive"));
        }
        if let Some(speed) = c {
            DispersionParams::new(m0, speed)?;
        }
        let d = functions[0].dimension;
        if functions.iter().any(|f| f.dimension != d) {
            return Err(Error::DimensionMismatch("mode functions differ in dimension".into()));
        }
        let gram = gram_matrix(&functions, |_| 1.0, &quad)?;
        let eig = SymmetricEigen::new(gram.clone());
        let top = eig.eigenvalues.max();
        if !(eig.eigenvalues.min() > 1e-10 * top) {
            return Err(Error::invalid("mode functions are linearly dependent"));
        }
        // Modes e = Lambda^{-1/2} U^T f are orthonormal.
        let n = functions.len();
        let mut transform = eig.eigenvectors.transpose();
        for i in 0..n {
            let s = 1.0 / eig.eigenvalues[i].sqrt();
            transform.row_mut(i).scale_mut(s);
        }
        let check = &transform * gram * transform.transpose();
        let gram_residual = (check - DMatrix::<f64>::identity(n, n)).abs().max();
        if gram_residual > GRAM_TOLERANCE {
            return Err(Error::Assertion(format!("orthonormalized Gram defect {gram_residual:e}")));
        }
        Ok(ModeBasis {
            functions,
            transform,
            m0,
            c,
            quad,
            gram_residual,
        })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.functions[0].dimension
    }

    pub fn dispersion(&self) -> Option<DispersionParams> {
        self.c.map(|c| DispersionParams { m0: self.m0, c })
    }

    /// `(e_i, w e_j)` over the orthonormal modes.
    pub fn weighted_gram<W: Fn(f64) -> f64>(&self, weight: W) -> Result<DMatrix<f64>> {
        let g = gram_matrix(&self.functions, weight, &self.quad)?;
        Ok(&self.transform * g * self.transform.transpose())
    }

    /// One-body matrix of `k^2 / (2 m0)`.
    pub fn kinetic_nonrelativistic(&self) -> Result<DMatrix<f64>> {
        let m0 = self.m0;
        self.weighted_gram(|k| 0.5 * k * k / m0)
    }

    /// One-body matrix of `omega_k - m0 c^2`.
    pub fn kinetic_relativistic(&self) -> Result<DMatrix<f64>> {
        let p = self.dispersion().ok_or_else(|| Error::invalid("basis has no finite c"))?;
        self.weighted_gram(|k| kinetic_relativistic(k, &p))
    }

    /// Coefficients of `f` over the orthonormal modes.
    pub fn coefficients(&self, f: &TestFunction) -> Result<Vec<f64>> {
        let raw = self
            .functions
            .iter()
            .map(|g| Ok(overlap(g, f, |_| 1.0, &self.quad)?.value.re))
            .collect::<Result<Vec<f64>>>()?;
        let coeffs = &self.transform * nalgebra::DVector::from_vec(raw);
        let norm = f.momentum_norm_sq(&self.quad)?;
        let defect = norm - coeffs.norm_squared();
        if defect.abs() > SPAN_TOLERANCE * norm.max(1.0) {
            return Err(Error::SpanViolation(defect));
        }
        Ok(coeffs.iter().copied().collect())
    }
}

fn gram_matrix<W: Fn(f64) -> f64>(fs: &[TestFunction], weight: W, quad: &QuadratureSpec) -> Result<DMatrix<f64>> {
    let n = fs.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = overlap(&fs[i], &fs[j], &weight, quad)?.value.re;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Kernel used to build the fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Weighting {
    Nonrelativistic,
    Relativistic,
}

/// Sign of the phase in the exponentiated commutation relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum WeylPhase {
    /// `e^{+i (f, g)}`, the phase implied by `[Phi(f), Pi(g)] = i (f, g)`.
    #[default]
    Consistent,
    /// `e^{-i (f, g)}`; agrees with the commutator only when `(f, g) = 0`.
    Reversed,
}

/// Smeared fields over a mode basis on a truncated Fock space.
///
/// `Phi(f) = sum_j u_j (a_j + a*_j)` and `Pi(g) = i sum_j v_j (a*_j - a_j)`,
/// where `u = f^T phi_coords` and `v = g^T pi_coords` are coordinates of the
/// weighted smearing functions over the Fock modes.
#[derive(Debug, Clone)]
pub struct FieldOperators {
    pub fock: TruncatedFock,
    pub weighting: Weighting,
    pub m0: f64,
    phi_coords: DMatrix<f64>,
    pi_coords: DMatrix<f64>,
}

impl FieldOperators {
    pub fn new(basis: &ModeBasis, weighting: Weighting, cutoff: usize) -> Result<Self> {
        let n = basis.len();
        let (phi_coords, pi_coords) = match weighting {
            Weighting::Nonrelativistic => (
                DMatrix::identity(n, n) / (2.0 * basis.m0).sqrt(),
                DMatrix::identity(n, n) * (0.5 * basis.m0).sqrt(),
            ),
            Weighting::Relativistic => {
                let p = basis
                    .dispersion()
                    .ok_or_else(|| Error::invalid("relativistic fields need a finite c"))?;
                let cc = p.c * p.c;
                let a = basis.weighted_gram(|k| cc / (2.0 * omega_c(k, &p)))?;
                let b = basis.weighted_gram(|_| 0.5)?;
                let d = basis.weighted_gram(|k| omega_c(k, &p) / (2.0 * cc))?;
                let mut g = DMatrix::zeros(2 * n, 2 * n);
                g.view_mut((0, 0), (n, n)).copy_from(&a);
                g.view_mut((0, n), (n, n)).copy_from(&b);
                g.view_mut((n, 0), (n, n)).copy_from(&b.transpose());
                g.view_mut((n, n), (n, n)).copy_from(&d);
                let coords = span_coordinates(&g);
                (coords.rows(0, n).into_owned(), coords.rows(n, n).into_owned())
            }
        };
        let fock = TruncatedFock::new(phi_coords.ncols(), cutoff)?;
        Ok(FieldOperators {
            fock,
            weighting,
            m0: basis.m0,
            phi_coords,
            pi_coords,
        })
    }

    fn coords(&self, which: &DMatrix<f64>, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != which.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} basis modes",
                f.len(),
                which.nrows()
            )));
        }
        Ok((0..which.ncols())
            .map(|j| f.iter().enumerate().map(|(i, fi)| fi * which[(i, j)]).sum())
            .collect())
    }

    /// Coherent amplitude displaced by `e^{i Phi(f)}`.
    pub fn phi_amplitude(&self, f: &[f64]) -> Result<f64> {
        Ok(self.coords(&self.phi_coords, f)?.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// Coherent amplitude displaced by `e^{i Pi(g)}`.
    pub fn pi_amplitude(&self, g: &[f64]) -> Result<f64> {
        Ok(self.coords(&self.pi_coords, g)?.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    pub fn apply_phi(&self, f: &[f64], psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let u = self.coords(&self.phi_coords, f)?;
        let mut out = vec![c(0.0); self.fock.dimension];
        for (j, uj) in u.iter().enumerate() {
            if *uj == 0.0 {
                continue;
            }
            let lo = self.fock.lower(j, psi)?;
            let hi = self.fock.raise(j, psi)?;
            for (o, (l, h)) in out.iter_mut().zip(lo.iter().zip(&hi)) {
                *o += (l + h) * uj;
            }
        }
        Ok(out)
    }

    pub fn apply_pi(&self, g: &[f64], psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let v = self.coords(&self.pi_coords, g)?;
        let i = Complex64::new(0.0, 1.0);
        let mut out = vec![c(0.0); self.fock.dimension];
        for (j, vj) in v.iter().enumerate() {
            if *vj == 0.0 {
                continue;
            }
            let lo = self.fock.lower(j, psi)?;
            let hi = self.fock.raise(j, psi)?;
            for (o, (l, h)) in out.iter_mut().zip(lo.iter().zip(&hi)) {
                *o += i * (h - l) * *vj;
            }
        }
        Ok(out)
    }

    /// `a(f) psi = (m0/2)^{1/2} Phi(f) psi + i (2 m0)^{-1/2} Pi(f) psi`.
    pub fn apply_annihilation(&self, f: &[f64], psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let phi = self.apply_phi(f, psi)?;
        let pi = self.apply_pi(f, psi)?;
        let (s, t) = ((0.5 * self.m0).sqrt(), Complex64::new(0.0, 1.0 / (2.0 * self.m0).sqrt()));
        Ok(phi.iter().zip(&pi).map(|(x, y)| x * s + y * t).collect())
    }

    pub fn phi_matrix(&self, f: &[f64]) -> Result<CMatrix> {
        self.dense(|psi| self.apply_phi(f, psi))
    }

    pub fn pi_matrix(&self, g: &[f64]) -> Result<CMatrix> {
        self.dense(|psi| self.apply_pi(g, psi))
    }

    fn dense(&self, op: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>) -> Result<CMatrix> {
        let n = self.fock.dimension;
        let mut m = CMatrix::zeros(n, n);
        let mut e = vec![c(0.0); n];
        for col in 0..n {
            e[col] = c(1.0);
            let image = op(&e)?;
            e[col] = c(0.0);
            for (row, v) in image.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        Ok(m)
    }
}

/// Coordinates of vectors with Gram matrix `g` over an orthonormal basis of
/// their span: row `i` holds the coordinates of vector `i`. Directions with
/// eigenvalue below `1e-13` of the largest are dropped.
fn span_coordinates(g: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(g.clone());
    let top = eig.eigenvalues.max();
    let kept: Vec<usize> = (0..g.nrows()).filter(|&j| eig.eigenvalues[j] > 1e-13 * top).collect();
    let mut coords = DMatrix::zeros(g.nrows(), kept.len());
    for (col, &j) in kept.iter().enumerate() {
        let s = eig.eigenvalues[j].sqrt();
        for i in 0..g.nrows() {
            coords[(i, col)] = eig.eigenvectors[(i, j)] * s;
        }
    }
    coords
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `<chi, [Phi(f), Pi(g)] chi>`. The state must stay at least two quanta
/// below the cutoff in every mode.
pub fn smeared_commutator(fields: &FieldOperators, f: &[f64], g: &[f64], chi: &[Complex64]) -> Result<Complex64> {
    let (level, weight) = fields.fock.occupation_reach(chi)?;
    if level + 2 > fields.fock.cutoff {
        return Err(Error::UnsafeState { weight, level });
    }
    let phi_pi = fields.apply_phi(f, &fields.apply_pi(g, chi)?)?;
    let pi_phi = fields.apply_pi(g, &fields.apply_phi(f, chi)?)?;
    Ok(inner(chi, &phi_pi) - inner(chi, &pi_phi))
}

/// `e^{iH}` for Hermitian `H`, through its eigen-decomposition.
fn unitary_exp(h: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let phases = nalgebra::DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|l| Complex64::new(0.0, *l).exp()),
    );
    &eig.eigenvectors * CMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint()
}

/// Spectral norm of
/// `e^{i Pi(f)} e^{i Phi(g)} - e^{i Phi(g)} e^{i Pi(f)} e^{+-i (f, g)}`
/// restricted to states with every occupation at most `D/4`. Coherent
/// amplitudes of both exponentials are limited to `sqrt(D)/4`.
pub fn weyl_relation_residual(fields: &FieldOperators, f: &[f64], g: &[f64], phase: WeylPhase) -> Result<f64> {
    let limit = (fields.fock.cutoff as f64).sqrt() / 4.0;
    let amplitude = fields.pi_amplitude(f)?.max(fields.phi_amplitude(g)?);
    if amplitude > limit {
        return Err(Error::AmplitudeTooLarge { amplitude, limit });
    }
    let fg: f64 = f.iter().zip(g).map(|(x, y)| x * y).sum();
    let sign = match phase {
        WeylPhase::Consistent => 1.0,
        WeylPhase::Reversed => -1.0,
    };
    let e_pi = unitary_exp(&fields.pi_matrix(f)?);
    let e_phi = unitary_exp(&fields.phi_matrix(g)?);
    let defect = &e_pi * &e_phi - &e_phi * &e_pi * Complex64::new(0.0, sign * fg).exp();
    let safe_level = fields.fock.cutoff / 4;
    let safe: Vec<usize> = (0..fields.fock.dimension)
        .filter(|&i| fields.fock.occupations(i).iter().all(|n| *n <= safe_level))
        .collect();
    let restricted = defect.select_columns(safe.iter());
    Ok(restricted.singular_values().max())
}

/// `max_i ||a(e_i) Psi_0||` over the basis modes, with `a` assembled from
/// the nonrelativistic fields.
pub fn vacuum_annihilation_check(basis: &ModeBasis, cutoff: usize) -> Result<f64> {
    let fields = FieldOperators::new(basis, Weighting::Nonrelativistic, cutoff)?;
    let vacuum = fields.fock.vacuum();
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        let mut e = vec![0.0; basis.len()];
        e[i] = 1.0;
        let image = fields.apply_annihilation(&e, &vacuum)?;
        worst = worst.max(inner(&image, &image).re.sqrt());
    }
    if worst >= 1e-12 {
        return Err(Error::Assertion(format!("a(f) leaves |{worst:e}| on the vacuum")));
    }
    Ok(worst)
}

/// `(Psi_0, Phi(f1) Phi(f2) Psi_0)` computed as a Fock matrix element.
pub fn two_point_vacuum(
    basis: &ModeBasis,
    f1: &TestFunction,
    f2: &TestFunction,
    weighting: Weighting,
) -> Result<Complex64> {
    let c1 = basis.coefficients(f1)?;
    let c2 = basis.coefficients(f2)?;
    // One quantum per mode is enough: the vacuum overlap only sees the
    // one-particle component of Phi(f2) Psi_0.
    let fields = FieldOperators::new(basis, weighting, 1)?;
    let vacuum = fields.fock.vacuum();
    let left = fields.apply_phi(&c1, &vacuum)?;
    let right = fields.apply_phi(&c2, &vacuum)?;
    Ok(inner(&left, &right))
}
