//! Lebesgue and Riesz-potential norms of spectral fields by spatial quadrature.

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::spectral::SpectralField;

/// Oversampling of the quadrature grid for `L^p` norms.
pub const QUADRATURE_OVERSAMPLING: usize = 2;
/// Oversampling of the grid whose maximum stands in for `L^∞`.
pub const SUP_OVERSAMPLING: usize = 4;

fn real_samples(field: &SpectralField, factor: usize) -> Result<Vec<f64>> {
    Ok(field.padded(factor)?.to_samples().into_iter().map(|v| v.re).collect())
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("Lebesgue exponent must be at least 1, got {p}")))
    }
}

fn quadrature(field: &SpectralField, samples: &[f64], p: f64) -> f64 {
    let g = &field.grid;
    let cell = g.volume() / samples.len() as f64;
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    // Factor out the maximum so large p cannot overflow.
    let sum: f64 = samples.iter().map(|v| (v.abs() / max).powf(p)).sum();
    max * (cell * sum).powf(1.0 / p)
}

/// `max |u|` on a grid refined by [`SUP_OVERSAMPLING`]; a lower bound on the true supremum.
pub fn sup_norm(field: &SpectralField) -> Result<f64> {
    Ok(real_samples(field, SUP_OVERSAMPLING)?
        .into_iter()
        .fold(0.0, |m, v| m.max(v.abs())))
}

/// `‖u‖_{L^p}` of the real part of `u`; `p = ∞` gives [`sup_norm`].
pub fn lp_norm(field: &SpectralField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return sup_norm(field);
    }
    let samples = real_samples(field, QUADRATURE_OVERSAMPLING)?;
    let fine = field.padded(QUADRATURE_OVERSAMPLING)?;
    Ok(quadrature(&fine, &samples, p))
}

/// `‖|D|^s u‖_{L^p}`.
pub fn riesz_norm(field: &SpectralField, s: f64, p: f64) -> Result<f64> {
    lp_norm(&field.fractional_derivative(s)?, p)
}

/// `|u|^p` sampled on a grid refined by [`QUADRATURE_OVERSAMPLING`].
pub fn abs_power(field: &SpectralField, p: f64) -> Result<SpectralField> {
    let fine = field.padded(QUADRATURE_OVERSAMPLING)?;
    let samples: Vec<C64> = fine
        .to_samples()
        .into_iter()
        .map(|v| C64::new(v.re.abs().powf(p), 0.0))
        .collect();
    SpectralField::from_samples(fine.grid, &samples)
}

/// Pointwise product of two real fields on a grid refined by [`QUADRATURE_OVERSAMPLING`].
pub fn product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    if u.grid != v.grid {
        return Err(domain("product of fields on different grids"));
    }
    let a = u.padded(QUADRATURE_OVERSAMPLING)?;
    let b = v.padded(QUADRATURE_OVERSAMPLING)?.to_samples();
    let samples: Vec<C64> = a
        .to_samples()
        .into_iter()
        .zip(b)
        .map(|(x, y)| C64::new(x.re * y.re, 0.0))
        .collect();
    SpectralField::from_samples(a.grid, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn cosine_norms() {
        let g = GridSpec::new(2, 16, PI).unwrap();
        let u = SpectralField::from_fn(g, |x| (2.0 * x[0]).cos()).unwrap();
        // ∫ cos² over [−π, π]² is 2π², ∫ cos⁴ is 3π²/2.
        assert!((lp_norm(&u, 2.0).unwrap() - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
        assert!((lp_norm(&u, 4.0).unwrap() - (1.5 * PI * PI).powf(0.25)).abs() < 1e-12);
        assert!((sup_norm(&u).unwrap() - 1.0).abs() < 1e-12);
        assert!((riesz_norm(&u, 1.0, 2.0).unwrap() - 2.0 * (2.0 * PI * PI).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn power_of_a_cosine() {
        let g = GridSpec::new(1, 16, PI).unwrap();
        let u = SpectralField::from_fn(g, |x| x[0].cos()).unwrap();
        let sq = abs_power(&u, 2.0).unwrap();
        let want = SpectralField::from_fn(sq.grid, |x| 0.5 + 0.5 * (2.0 * x[0]).cos()).unwrap();
        for (a, b) in sq.coeffs.iter().zip(&want.coeffs) {
            assert!((a - b).norm() < 1e-14);
        }
        let pr = product(&u, &u).unwrap();
        assert_eq!(pr.grid, sq.grid);
        for (a, b) in pr.coeffs.iter().zip(&sq.coeffs) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
