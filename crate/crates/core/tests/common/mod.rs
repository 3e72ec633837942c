//! Reference computations that share no code with the library.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Second-order finite differences for `-u''` on `[0, L]` with
/// `u'(0) = s0 u(0)`, `u'(L) = -sl u(L)` (ghost points), symmetrized.
/// Returns diagonal and off-diagonal of a symmetric tridiagonal matrix.
fn robin_fd_matrix(s0: f64, sl: f64, length: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = length / n as f64;
    let h2 = h * h;
    let mut d = vec![2.0 / h2; n + 1];
    let mut e = vec![-1.0 / h2; n];
    d[0] = 2.0 * (1.0 + h * s0) / h2;
    d[n] = 2.0 * (1.0 + h * sl) / h2;
    e[0] *= 2f64.sqrt();
    e[n - 1] *= 2f64.sqrt();
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix below `x` (Sturm count).
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let prev = if q == 0.0 { 1e-300 } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `index`-th eigenvalue (0-based) by bisection on the Sturm count.
pub fn tridiagonal_eigenvalue(d: &[f64], e: &[f64], index: usize) -> f64 {
    let bound = d
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let right = if i < e.len() { e[i].abs() } else { 0.0 };
            di.abs() + left + right
        })
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(d, e, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Lowest `count` Robin energies from `n`- and `2n`-interval grids with one
/// Richardson step.
pub fn robin_fd_energies(s0: f64, sl: f64, length: f64, n: usize, count: usize) -> Vec<f64> {
    let (d1, e1) = robin_fd_matrix(s0, sl, length, n);
    let (d2, e2) = robin_fd_matrix(s0, sl, length, 2 * n);
    (0..count)
        .map(|i| {
            let coarse = tridiagonal_eigenvalue(&d1, &e1, i);
            let fine = tridiagonal_eigenvalue(&d2, &e2, i);
            (4.0 * fine - coarse) / 3.0
        })
        .collect()
}

/// Crank-Nicolson for `i u_t = -u_xx` on `[0, L]` with `u = 0` at both
/// walls, fourth-order differences in space with odd reflection across the
/// walls. `u0` holds the `m` interior samples on a uniform grid.
pub fn crank_nicolson_dirichlet(u0: &[Complex64], length: f64, t: f64, steps: usize) -> Vec<Complex64> {
    let m = u0.len();
    let h = length / (m + 1) as f64;
    let dt = t / steps as f64;
    // K u = -u'' with stencil (1, -16, 30, -16, 1) / 12h^2; u_{-1} = -u_1
    // folds into the first and last diagonal entries.
    let s = 1.0 / (12.0 * h * h);
    let mut k = vec![[0.0f64; 5]; m];
    for (i, row) in k.iter_mut().enumerate() {
        *row = [s, -16.0 * s, 30.0 * s, -16.0 * s, s];
        if i == 0 || i + 1 == m {
            row[2] -= s;
        }
    }
    let apply = |u: &[Complex64], sign: f64| -> Vec<Complex64> {
        let half = Complex64::new(0.0, sign * 0.5 * dt);
        (0..m)
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, c) in k[i].iter().enumerate() {
                    let j = i as isize + b as isize - 2;
                    if j >= 0 && (j as usize) < m {
                        acc += c * u[j as usize];
                    }
                }
                u[i] + half * acc
            })
            .collect()
    };
    // Banded LU of (1 + i dt/2 K), no pivoting.
    let mut band: Vec<[Complex64; 5]> = k
        .iter()
        .map(|row| {
            let mut r = [Complex64::new(0.0, 0.0); 5];
            for b in 0..5 {
                r[b] = Complex64::new(0.0, 0.5 * dt * row[b]);
            }
            r[2] += 1.0;
            r
        })
        .collect();
    let mut lower = vec![[Complex64::new(0.0, 0.0); 2]; m];
    for i in 0..m {
        for d in 1..=2 {
            let r = i + d;
            if r >= m {
                break;
            }
            // Entry (r, i) sits at band offset 2 - d of row r.
            let factor = band[r][2 - d] / band[i][2];
            lower[r][2 - d] = factor;
            for c in 0..=2 {
                // Row i column i + c is band offset 2 + c; row r offset 2 - d + c.
                if 2 + c < 5 && 2 - d + c < 5 {
                    let v = band[i][2 + c];
                    band[r][2 - d + c] -= factor * v;
                }
            }
        }
    }
    let mut u = u0.to_vec();
    for _ in 0..steps {
        let mut y = apply(&u, -1.0);
        for i in 0..m {
            for d in 1..=2 {
                if i >= d {
                    let l = lower[i][2 - d];
                    let prev = y[i - d];
                    y[i] -= l * prev;
                }
            }
        }
        for i in (0..m).rev() {
            let mut acc = y[i];
            for c in 1..=2 {
                if i + c < m {
                    acc -= band[i][2 + c] * y[i + c];
                }
            }
            y[i] = acc / band[i][2];
        }
        u = y;
    }
    u
}

/// `beta(k)` from truncated Taylor series in `y = (k/(m0 c))^2`.
/// Only meaningful for `y < 1`.
pub fn beta_taylor(k: f64, tau: f64, m0: f64, c: f64, terms: usize) -> Complex64 {
    let y = (k / (m0 * c)).powi(2);
    // (1 + y)^{-1/2} and (1 + y)^{1/2} by binomial series.
    let mut inv_sqrt = 0.0;
    let mut sqrt = 0.0;
    let (mut a, mut b) = (1.0, 1.0);
    let mut yn = 1.0;
    for n in 0..terms {
        inv_sqrt += a * yn;
        sqrt += b * yn;
        let nf = n as f64;
        a *= (-0.5 - nf) / (nf + 1.0);
        b *= (0.5 - nf) / (nf + 1.0);
        yn *= y;
    }
    let k_nr = 0.5 / m0;
    let k_r = k_nr * inv_sqrt;
    let kinetic = m0 * c * c * (sqrt - 1.0);
    let a = k * k / (2.0 * m0);
    k_nr * Complex64::new(0.0, -tau * a).exp() - k_r * Complex64::new(0.0, -tau * kinetic).exp()
}

/// Unit-norm Gaussian momentum profile in three dimensions.
pub fn gaussian_profile_3d(width: f64, k2: f64) -> f64 {
    (width * width / PI).powf(0.75) * (-0.5 * k2 * width * width).exp()
}

/// `int_{R^3} g(kx, ky, kz) d^3k` by the trapezoidal rule on a cube of
/// half-width `extent` with `n` points per axis. Spectrally accurate for
/// integrands that are smooth and negligible at the faces.
pub fn cartesian_integral_3d(g: impl Fn(f64, f64, f64) -> Complex64 + Sync, extent: f64, n: usize) -> Complex64 {
    let h = 2.0 * extent / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| -extent + h * i as f64).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &x in &xs {
        for &y in &xs {
            for &z in &xs {
                total += g(x, y, z);
            }
        }
    }
    total * h * h * h
}

/// Free Gaussian of position spread `sigma` at time `t`, mass `m`, `hbar = 1`.
pub fn free_gaussian(x: f64, sigma: f64, t: f64, m: f64) -> Complex64 {
    let s2 = sigma * sigma;
    let spread = Complex64::new(1.0, t / (2.0 * m * s2));
    (2.0 * PI * s2).powf(-0.25) / spread.sqrt() * (-x * x / (4.0 * s2 * spread)).exp()
}

/// Root of a continuous `f` with a sign change on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}
