use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerances and subdivision budget for [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            relative_tolerance: 1e-12,
            absolute_tolerance: 1e-15,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, absolute_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Integration domain. Infinite ends are mapped onto `[0, 1)` with
/// `x = a + t / (1 - t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    /// `[a, inf)`
    UpperHalf(f64),
    /// `(-inf, b]`
    LowerHalf(f64),
    Real,
}

/// Integral value together with the engine's error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// Globally adaptive Gauss-Kronrod on a finite interval.
fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let first = gk15(f, a, b);
    let mut total = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        let tolerance = spec.absolute_tolerance.max(spec.relative_tolerance * total.norm());
        if error <= tolerance {
            return Ok(Integral {
                value: total,
                error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                error,
                tolerance,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval can no longer be split in f64; keep it and stop refining it.
            return Err(Error::NonConvergence {
                error,
                tolerance,
                subdivisions,
            });
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum occasionally so cancellation in the running error does not drift.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrate `f` over `interval` to `max(abs_tol, rel_tol * |result|)`.
pub fn integrate_1d<F>(f: F, interval: Interval, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    match interval {
        Interval::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::invalid("finite interval with non-finite end"));
            }
            if a == b {
                return Ok(Integral {
                    value: Complex64::new(0.0, 0.0),
                    error: 0.0,
                    subdivisions: 0,
                });
            }
            if a > b {
                let r = adaptive(&f, b, a, spec)?;
                return Ok(Integral { value: -r.value, ..r });
            }
            adaptive(&f, a, b, spec)
        }
        Interval::UpperHalf(a) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        Interval::LowerHalf(b) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                f(b - t / s) / (s * s)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        Interval::Real => {
            let upper = adaptive(
                &|t: f64| {
                    let s = 1.0 - t;
                    f(t / s) / (s * s)
                },
                0.0,
                1.0,
                spec,
            )?;
            let lower = adaptive(
                &|t: f64| {
                    let s = 1.0 - t;
                    f(-t / s) / (s * s)
                },
                0.0,
                1.0,
                spec,
            )?;
            Ok(Integral {
                value: upper.value + lower.value,
                error: upper.error + lower.error,
                subdivisions: upper.subdivisions + lower.subdivisions,
            })
        }
    }
}

/// `int d^3k g(|k|)` for an isotropic integrand with radial profile `g`.
pub fn integrate_radial_3d<F>(g: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    integrate_1d(|k| g(k) * (4.0 * PI * k * k), Interval::UpperHalf(0.0), spec)
}
