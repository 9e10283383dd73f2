//! Seeded ensembles of random real band-limited fields.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::par;
use crate::spectral::{GridSpec, SpectralField};

/// Random fields with independent complex Gaussian coefficients, envelope
/// `|ξ|^{−α}`, no mean, and modes up to half the Nyquist wavenumber.
///
/// Field `i` depends only on `(seed, i)`, so ensembles are reproducible and
/// a larger ensemble extends a smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldEnsemble {
    pub grid: GridSpec,
    pub alpha: f64,
    pub seed: u64,
}

impl FieldEnsemble {
    pub fn new(grid: GridSpec, alpha: f64, seed: u64) -> Result<Self> {
        grid.validate()?;
        if !(alpha >= 0.0) {
            return Err(domain(format!("spectral envelope exponent must be non-negative, got {alpha}")));
        }
        Ok(Self { grid, alpha, seed })
    }

    /// Field number `index`, normalised to unit `L²` norm.
    pub fn sample(&self, index: usize) -> SpectralField {
        let g = self.grid;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let cap2 = ((g.points / 4) as i64).pow(2);
        let b = g.base_frequency();
        let mut f = SpectralField::zeros(g);
        // Draw each conjugate pair once, from the member with the larger flat index.
        for i in 0..g.len() {
            let k = g.wavevector(i);
            let k2: i64 = k.iter().map(|x| x * x).sum();
            if k2 == 0 || k2 > cap2 {
                continue;
            }
            let neg: Vec<i64> = k[..g.dim].iter().map(|&x| -x).collect();
            let j = g.flat_index(&neg).expect("band-limited mode has a partner");
            if j > i {
                continue;
            }
            let amp = (b * (k2 as f64).sqrt()).powf(-self.alpha);
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let c = C64::new(re, im) * amp;
            f.coeffs[i] = c;
            f.coeffs[j] = c.conj();
        }
        let norm = f.l2_norm();
        if norm > 0.0 {
            f = f.scale(1.0 / norm);
        }
        f
    }

    /// Fields `0..count`.
    pub fn take(&self, count: usize) -> Vec<SpectralField> {
        par::map_range(count, |i| self.sample(i))
    }
}

/// `amplitude · cos(ξ_k · x)` for an integer wavevector `k ≠ 0`.
pub fn cosine_mode(grid: GridSpec, k: &[i64], amplitude: f64) -> Result<SpectralField> {
    let mut f = SpectralField::single_mode(grid, k, C64::new(0.5 * amplitude, 0.0))?;
    let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
    let j = grid
        .flat_index(&neg)
        .ok_or_else(|| domain(format!("wavevector {neg:?} is not on the grid")))?;
    if f.coeffs[j] != C64::new(0.0, 0.0) {
        return Err(domain("cosine modes need a nonzero wavevector below the Nyquist index"));
    }
    f.coeffs[j] = C64::new(0.5 * amplitude, 0.0);
    Ok(f)
}
