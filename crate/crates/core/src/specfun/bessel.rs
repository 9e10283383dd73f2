//! `J0`, `Y0` and their derivatives on `τ > 0`.
//!
//! Power series below [`BESSEL_SWITCH`], Hankel asymptotic expansions above.
//! At the switch point the two agree to about `1e-11` relative.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

/// Argument at which evaluation switches from the series to the asymptotic form.
pub const BESSEL_SWITCH: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Values of `J0(τ)`, `Y0(τ)`, `J0'(τ) = −J1(τ)` and `Y0'(τ) = −Y1(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJY {
    pub j0: f64,
    pub y0: f64,
    pub j0p: f64,
    pub y0p: f64,
}

/// Evaluate `J0`, `Y0` and derivatives at `τ > 0`.
pub fn bessel_j0y0(tau: f64) -> Result<BesselJY> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(domain(format!("Bessel functions need τ > 0, got {tau}")));
    }
    if tau < BESSEL_SWITCH {
        Ok(series(tau))
    } else {
        Ok(asymptotic(tau))
    }
}

fn series(x: f64) -> BesselJY {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (−q)^k / (k!)²
    let mut j0 = 1.0;
    let mut j0p_sum = 0.0; // Σ (−1)^k 2k q^k/(k!)², divided by x later
    let mut ysum = 0.0; // Σ (−1)^{k+1} H_k q^k/(k!)²
    let mut ypsum = 0.0; // Σ (−1)^{k+1} H_k 2k q^k/(k!)², divided by x later
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        j0p_sum += 2.0 * kf * term;
        ysum -= harmonic * term;
        ypsum -= harmonic * 2.0 * kf * term;
        if term.abs() * harmonic * 2.0 * kf < 1e-18 * (j0.abs() + ysum.abs() + 1e-300) && kf > q.sqrt() {
            break;
        }
    }
    let j0p = j0p_sum / x;
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = 2.0 / PI * (lg * j0 + ysum);
    let y0p = 2.0 / PI * (j0 / x + lg * j0p + ypsum / x);
    BesselJY { j0, y0, j0p, y0p }
}

/// Hankel's `P(ν, x)` and `Q(ν, x)` for `ν ∈ {0, 1}`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(ν)/x^k
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        let mag = a.abs();
        if mag > last || mag < 1e-17 {
            break;
        }
        last = mag;
        // Signs: P = Σ (−1)^j a_{2j}, Q = Σ (−1)^j a_{2j+1}.
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
    }
    (p, q)
}

fn asymptotic(x: f64) -> BesselJY {
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    // χ0 = x − π/4, χ1 = x − 3π/4, expanded to avoid rounding π/4 into x.
    let (cos0, sin0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let (cos1, sin1) = ((s - c) * FRAC_1_SQRT_2, (-s - c) * FRAC_1_SQRT_2);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let j0 = amp * (p0 * cos0 - q0 * sin0);
    let y0 = amp * (p0 * sin0 + q0 * cos0);
    let j1 = amp * (p1 * cos1 - q1 * sin1);
    let y1 = amp * (p1 * sin1 + q1 * cos1);
    BesselJY { j0, y0, j0p: -j1, y0p: -y1 }
}
