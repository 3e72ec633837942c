use crate::{Error, Result};

/// Sign-changing bracket `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub residual_lo: f64,
    pub residual_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, residual_lo: f64, residual_hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::invalid(format!("bracket requires lo < hi, got [{lo}, {hi}]")));
        }
        if !(residual_lo * residual_hi < 0.0) {
            return Err(Error::invalid("bracket residuals must change sign"));
        }
        Ok(Bracket {
            lo,
            hi,
            residual_lo,
            residual_hi,
        })
    }

    pub fn of<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Self> {
        Bracket::new(lo, hi, f(lo), f(hi))
    }
}

/// Brent's method on a sign-changing bracket, to `xtol` absolute width (or
/// until an exact zero is hit).
pub fn brent<F: Fn(f64) -> f64>(f: &F, bracket: Bracket, xtol: f64) -> f64 {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.residual_lo, bracket.residual_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    b
}

/// Options for [`find_roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootScan {
    /// Samples per singularity-free span on the first pass.
    pub samples_per_span: usize,
    /// Points where the residual may blow up; never bracketed across.
    pub singularities: Vec<f64>,
    /// When set, the number of roots in the search interval.
    pub expected_count: Option<usize>,
    /// How many times the sampling density may double before giving up.
    pub max_doublings: u32,
}

impl Default for RootScan {
    fn default() -> Self {
        RootScan {
            samples_per_span: 512,
            singularities: Vec::new(),
            expected_count: None,
            max_doublings: 12,
        }
    }
}

impl RootScan {
    pub fn expecting(count: usize) -> Self {
        RootScan {
            expected_count: Some(count),
            ..RootScan::default()
        }
    }

    pub fn with_singularities(mut self, singularities: impl IntoIterator<Item = f64>) -> Self {
        self.singularities = singularities.into_iter().collect();
        self
    }
}

/// Roots of `residual` on `[lo, hi]`, sorted ascending.
///
/// Each span between declared singularities is sampled uniformly and every
/// sign change is polished with Brent. A polished point is kept only if its
/// residual is below `1e-10` times the local slope scale; sign changes across
/// undeclared poles fail that test and are dropped. When `expected_count` is
/// set and not met, sampling density doubles until it is or the budget runs
/// out, in which case [`Error::MissedRoot`] is returned.
pub fn find_roots<F: Fn(f64) -> f64>(residual: F, lo: f64, hi: f64, scan: &RootScan) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("root search interval [{lo}, {hi}] is invalid")));
    }
    if scan.samples_per_span < 2 {
        return Err(Error::invalid("samples_per_span must be at least 2"));
    }
    let mut edges = vec![lo];
    let mut interior: Vec<f64> = scan.singularities.iter().copied().filter(|s| *s > lo && *s < hi).collect();
    interior.sort_by(f64::total_cmp);
    edges.extend(interior);
    edges.push(hi);
    let is_singular = |x: f64| scan.singularities.contains(&x);

    let mut samples = scan.samples_per_span;
    let mut found = Vec::new();
    for attempt in 0..=scan.max_doublings {
        found.clear();
        for w in edges.windows(2) {
            scan_span(&residual, w[0], w[1], samples, is_singular(w[0]), is_singular(w[1]), &mut found);
        }
        found.sort_by(f64::total_cmp);
        found.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0));
        match scan.expected_count {
            Some(n) if found.len() != n => {
                if attempt == scan.max_doublings || found.len() > n {
                    return Err(Error::MissedRoot {
                        expected: n,
                        found: found.len(),
                    });
                }
                samples *= 2;
            }
            _ => break,
        }
    }
    Ok(found)
}

fn scan_span<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    samples: usize,
    skip_a: bool,
    skip_b: bool,
    out: &mut Vec<f64>,
) {
    let h = (b - a) / samples as f64;
    let points: Vec<(f64, f64)> = (0..=samples)
        .filter(|&i| !(i == 0 && skip_a) && !(i == samples && skip_b))
        .map(|i| {
            let x = if i == samples { b } else { a + i as f64 * h };
            (x, f(x))
        })
        .filter(|(_, y)| y.is_finite())
        .collect();
    for (i, &(x, y)) in points.iter().enumerate() {
        if y == 0.0 {
            out.push(x);
            continue;
        }
        let Some(&(x2, y2)) = points.get(i + 1) else { break };
        if y2 == 0.0 || y * y2 > 0.0 {
            continue;
        }
        let bracket = Bracket {
            lo: x,
            hi: x2,
            residual_lo: y,
            residual_hi: y2,
        };
        let r = brent(f, bracket, 0.0);
        let fr = f(r);
        let slope = (y2 - y).abs() / (x2 - x);
        let scale = slope * r.abs().max(1.0);
        if fr.abs() <= 1e-10 * scale && fr.abs() <= y.abs().min(y2.abs()) {
            out.push(r);
        }
    }
}
