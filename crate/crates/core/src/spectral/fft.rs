//! Multi-dimensional FFT on cubic grids, applied axis by axis.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::par;

/// Forward and inverse plans for `points^dim` arrays stored row-major.
#[derive(Clone)]
pub struct FftNd {
    points: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftNd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd")
            .field("points", &self.points)
            .field("dim", &self.dim)
            .finish()
    }
}

impl FftNd {
    pub fn new(points: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            points,
            dim,
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        }
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unnormalised forward transform `Σ_j x_j e^{−2πi jk/N}` in place.
    pub fn forward(&self, data: &mut [C64]) {
        self.run(data, &self.forward);
    }

    /// Unnormalised inverse transform `Σ_k X_k e^{2πi jk/N}` in place.
    pub fn inverse(&self, data: &mut [C64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [C64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len(), "FFT buffer has the wrong length");
        let n = self.points;
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                let mut lines: Vec<&mut [C64]> = data.chunks_mut(n).collect();
                par::for_each_mut(&mut lines, |_, line| plan.process(line));
                continue;
            }
            let block = stride * n;
            let count = data.len() / n;
            let snapshot: &[C64] = data;
            let mut lines = par::map_range(count, |l| {
                let (outer, inner) = (l / stride, l % stride);
                let base = outer * block + inner;
                let mut line: Vec<C64> = (0..n).map(|k| snapshot[base + k * stride]).collect();
                plan.process(&mut line);
                line
            });
            for (l, line) in lines.iter_mut().enumerate() {
                let (outer, inner) = (l / stride, l % stride);
                let base = outer * block + inner;
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}
