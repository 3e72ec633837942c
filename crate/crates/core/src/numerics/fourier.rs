use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft as FftPlan, FftPlanner};

/// Unitary discrete Fourier transform of a fixed length.
pub struct Fft {
    forward: Arc<dyn FftPlan<f64>>,
    inverse: Arc<dyn FftPlan<f64>>,
    scale: f64,
}

impl Fft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In place, `X_j = n^{-1/2} sum_l x_l e^{-2 pi i j l / n}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
        data.iter_mut().for_each(|z| *z *= self.scale);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        data.iter_mut().for_each(|z| *z *= self.scale);
    }
}

/// Angular wavenumbers in FFT order for `n` samples over a period `length`.
pub fn fft_frequencies(n: usize, length: f64) -> Vec<f64> {
    let dk = 2.0 * PI / length;
    (0..n)
        .map(|j| {
            let j = j as i64;
            let signed = if j < (n as i64 + 1) / 2 { j } else { j - n as i64 };
            signed as f64 * dk
        })
        .collect()
}
