//! Periodic spectral representation of fields on `[−L, L)^d`.
//!
//! A field is stored through its Fourier series coefficients
//! `u(x) = Σ_k c_k e^{iξ_k·x}` with `ξ_k = π k / L`, in FFT index order. Norms
//! are integrals over the torus, so `‖u‖²_{L²} = (2L)^d Σ |c_k|²`, which makes
//! them approximations of the corresponding norms on `ℝ^d` for data
//! concentrated well inside the box.

mod fft;
pub mod io;
mod solver;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use fft::FftNd;
pub use solver::{
    apply_kernel, duhamel_solve, duhamel_solve_with, gaussian_data, picard_iterate, power_source, PicardReport, SolverConfig,
    Source, State, Trajectory,
    transformed_gaussian_data,
};

use crate::error::{domain, Result};
use crate::par;

/// Cubic periodic grid with `points` samples per axis on `[−L, L)^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub points: usize,
    pub half_length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, half_length: f64) -> Result<Self> {
        let g = Self { dim, points, half_length };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(domain(format!("grid dimension must be 1, 2 or 3, got {}", self.dim)));
        }
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(domain(format!("points per axis must be a power of two >= 8, got {}", self.points)));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(domain(format!("half length must be positive, got {}", self.half_length)));
        }
        Ok(())
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    /// Volume `(2L)^d` of the torus.
    pub fn volume(&self) -> f64 {
        (2.0 * self.half_length).powi(self.dim as i32)
    }

    /// Fundamental frequency `π / L`.
    pub fn base_frequency(&self) -> f64 {
        PI / self.half_length
    }

    /// Signed integer wavenumber of FFT index `i` along one axis.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Integer wavenumber vector of a flat coefficient index.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let mut k = [0i64; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            k[axis] = self.wavenumber(rest % self.points);
            rest /= self.points;
        }
        k
    }

    /// Flat index of an integer wavevector, if it lies on the grid.
    pub fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let n = self.points as i64;
        let mut flat = 0usize;
        for &ki in k {
            if ki < -n / 2 || ki >= n / 2 {
                return None;
            }
            flat = flat * self.points + ki.rem_euclid(n) as usize;
        }
        Some(flat)
    }

    /// `|k|²` for every coefficient; `|ξ| = (π/L) sqrt(|k|²)`.
    pub fn squared_wavenumbers(&self) -> Vec<u64> {
        (0..self.len())
            .map(|i| self.wavevector(i).iter().map(|&k| (k * k) as u64).sum())
            .collect()
    }

    /// `|ξ|` for every coefficient.
    pub fn frequency_magnitudes(&self) -> Vec<f64> {
        let b = self.base_frequency();
        self.squared_wavenumbers().into_iter().map(|k2| b * (k2 as f64).sqrt()).collect()
    }

    /// Whether any component of the wavevector sits at the Nyquist index.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = (self.points / 2) as i64;
        self.wavevector(flat)[..self.dim].iter().any(|&k| k == -half)
    }

    /// Spatial coordinates of a flat sample index.
    pub fn coordinates(&self, flat: usize) -> [f64; 3] {
        let mut x = [0.0; 3];
        let mut rest = flat;
        let h = self.spacing();
        for axis in (0..self.dim).rev() {
            x[axis] = -self.half_length + h * (rest % self.points) as f64;
            rest /= self.points;
        }
        x
    }

    /// The same torus with `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            points: self.points * factor,
            ..*self
        }
    }
}

/// Fourier coefficients of a field on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Vec<C64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            coeffs: vec![C64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<C64>) -> Result<Self> {
        grid.validate()?;
        if coeffs.len() != grid.len() {
            return Err(domain(format!("expected {} coefficients, got {}", grid.len(), coeffs.len())));
        }
        Ok(Self { grid, coeffs })
    }

    /// Coefficients of the trigonometric interpolant of point samples.
    pub fn from_samples(grid: GridSpec, samples: &[C64]) -> Result<Self> {
        grid.validate()?;
        if samples.len() != grid.len() {
            return Err(domain(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        let mut c = samples.to_vec();
        let fft = FftNd::new(grid.points, grid.dim);
        fft.forward(&mut c);
        let scale = 1.0 / grid.len() as f64;
        // Shift the phase origin from x = 0 to the first sample at x = −L.
        for (i, v) in c.iter_mut().enumerate() {
            *v *= scale * origin_phase(&grid, i).conj();
        }
        Ok(Self { grid, coeffs: c })
    }

    /// Sample a real function of the coordinates.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64 + Sync + Send) -> Result<Self> {
        grid.validate()?;
        let samples = par::map_range(grid.len(), |i| C64::new(f(&grid.coordinates(i)[..grid.dim]), 0.0));
        Self::from_samples(grid, &samples)
    }

    /// `amplitude · e^{iξ_k·x}` for an integer wavevector `k`.
    pub fn single_mode(grid: GridSpec, k: &[i64], amplitude: C64) -> Result<Self> {
        let idx = grid
            .flat_index(k)
            .ok_or_else(|| domain(format!("wavevector {k:?} is not on the grid")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[idx] = amplitude;
        Ok(f)
    }

    /// Point values on the grid.
    pub fn to_samples(&self) -> Vec<C64> {
        let mut c: Vec<C64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &v)| v * origin_phase(&self.grid, i))
            .collect();
        FftNd::new(self.grid.points, self.grid.dim).inverse(&mut c);
        c
    }

    /// `(∫ |u|² dx)^{1/2}` from the point samples by the rectangle rule.
    pub fn sample_l2_norm(&self) -> f64 {
        let cell = self.grid.spacing().powi(self.grid.dim as i32);
        (cell * self.to_samples().iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `‖u‖_{H^γ}` (weight `⟨ξ⟩^γ`) or `‖u‖_{Ḣ^γ}` (weight `|ξ|^γ`, zero mode dropped).
    pub fn sobolev_norm(&self, gamma: f64, homogeneous: bool) -> f64 {
        sobolev_norm_of(&self.grid, &self.coeffs, gamma, homogeneous)
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0, false)
    }

    /// `|D|^s u`, with the zero mode set to zero.
    pub fn fractional_derivative(&self, s: f64) -> Result<Self> {
        if !(s >= 0.0) {
            return Err(domain(format!("fractional order must be non-negative, got {s}")));
        }
        let xi = self.grid.frequency_magnitudes();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&xi)
            .map(|(&c, &x)| if x == 0.0 { C64::new(0.0, 0.0) } else { c * x.powf(s) })
            .collect();
        Ok(Self { grid: self.grid, coeffs })
    }

    /// Largest `|c_{−k} − conj(c_k)|`, which vanishes for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        (0..g.len())
            .filter(|&i| !g.is_nyquist(i))
            .map(|i| {
                let k = g.wavevector(i);
                let neg: Vec<i64> = k[..g.dim].iter().map(|&x| -x).collect();
                let j = g.flat_index(&neg).expect("negated non-Nyquist wavevector is on the grid");
                (self.coeffs[j] - self.coeffs[i].conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// The same trigonometric polynomial on a grid `factor` times finer.
    pub fn padded(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(domain("padding factor must be positive"));
        }
        let fine = self.grid.refined(factor);
        fine.validate()?;
        let mut out = Self::zeros(fine);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = fine
                .flat_index(&self.grid.wavevector(i)[..self.grid.dim])
                .expect("coarse wavevector lies on the finer grid");
            out.coeffs[j] = c;
        }
        Ok(out)
    }

    /// `u(λx)`: mode `k` moves to `λk`, which must stay on the grid.
    pub fn dilated(&self, lambda: usize) -> Result<Self> {
        if lambda == 1 {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(self.grid);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let k: Vec<i64> = self.grid.wavevector(i)[..self.grid.dim].iter().map(|&k| k * lambda as i64).collect();
            let j = self
                .grid
                .flat_index(&k)
                .filter(|&j| !self.grid.is_nyquist(j))
                .ok_or_else(|| domain(format!("dilation by {lambda} moves mode {k:?} off the grid")))?;
            out.coeffs[j] = c;
        }
        Ok(out)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * a).collect(),
        }
    }
}

/// `e^{−iξ_k·L·(1,…,1)}`, the phase of mode `k` at the corner `x = −L`.
fn origin_phase(grid: &GridSpec, flat: usize) -> C64 {
    let k = grid.wavevector(flat);
    // ξ_k L = π k, so the phase is (−1)^{Σk}.
    let sum: i64 = k[..grid.dim].iter().sum();
    if sum.rem_euclid(2) == 0 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(-1.0, 0.0)
    }
}

pub(crate) fn sobolev_norm_of(grid: &GridSpec, coeffs: &[C64], gamma: f64, homogeneous: bool) -> f64 {
    let b = grid.base_frequency();
    let mut sum = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let k2: i64 = grid.wavevector(i).iter().map(|k| k * k).sum();
        let xi2 = b * b * k2 as f64;
        let w = if homogeneous {
            if k2 == 0 {
                continue;
            }
            xi2.powf(gamma)
        } else {
            (1.0 + xi2).powf(gamma)
        };
        sum += w * c.norm_sqr();
    }
    (grid.volume() * sum).sqrt()
}
