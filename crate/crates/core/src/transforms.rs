//! Reduction of the Klein-Gordon equation to the three model problems.
//!
//! With `φ = e^{rt} u` the equation becomes
//! `u_tt − e^{−2t} Δu + (2r + n) u_t + (r² + rn + m²) u = e^{(p−1)rt} |u|^p`,
//! and the choice of `r` below removes either the mass term or the damping term.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `|m − n/2|` at or below this value selects the balanced regime.
pub const BALANCED_TOLERANCE: f64 = 1e-12;

/// The three model problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `0 <= m < n/2`: `u_tt − e^{−2t}Δu + μ u_t`, `μ = sqrt(n² − 4m²)`.
    Dissipation,
    /// `m = n/2`: `u_tt − e^{−2t}Δu`.
    Balanced,
    /// `m > n/2`: `u_tt − e^{−2t}Δu + μ² u`, `μ = sqrt(m² − n²/4)`.
    Mass,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Dissipation => "dissipation",
            Regime::Balanced => "balanced",
            Regime::Mass => "mass",
        };
        f.write_str(s)
    }
}

/// Parameters of the transformed problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub n: usize,
    pub m: f64,
    pub regime: Regime,
    /// Damping coefficient (dissipation) or mass frequency (mass); 0 when balanced.
    pub mu: f64,
    /// Exponent of the substitution `φ = e^{rt} u`.
    pub r: f64,
    /// Set for `m = 0`, which lies outside the range treated by the estimates.
    pub massless: bool,
}

/// Classify `(n, m)` and compute `μ` and `r`.
pub fn derive_params(n: usize, m: f64) -> Result<DerivedParams> {
    if n == 0 {
        return Err(domain("spatial dimension n must be at least 1"));
    }
    if !m.is_finite() || m < 0.0 {
        return Err(domain(format!("mass m must be finite and non-negative, got {m}")));
    }
    let nf = n as f64;
    let half = 0.5 * nf;
    let (regime, mu, r) = if (m - half).abs() <= BALANCED_TOLERANCE {
        (Regime::Balanced, 0.0, -half)
    } else if m < half {
        let mu = (nf * nf - 4.0 * m * m).sqrt();
        (Regime::Dissipation, mu, 0.5 * (mu - nf))
    } else {
        (Regime::Mass, (m * m - half * half).sqrt(), -half)
    };
    Ok(DerivedParams {
        n,
        m,
        regime,
        mu,
        r,
        massless: m == 0.0,
    })
}

impl DerivedParams {
    /// Build parameters directly from a regime and `μ`, choosing `m` accordingly.
    pub fn from_regime(n: usize, regime: Regime, mu: f64) -> Result<Self> {
        let nf = n as f64;
        let m = match regime {
            Regime::Dissipation => {
                if !(mu > 0.0 && mu <= nf) {
                    return Err(domain(format!("dissipation needs 0 < μ <= n, got μ = {mu}")));
                }
                (0.5 * (nf * nf - mu * mu).max(0.0).sqrt()).max(0.0)
            }
            Regime::Balanced => 0.5 * nf,
            Regime::Mass => {
                if !(mu > 0.0) {
                    return Err(domain(format!("mass regime needs μ > 0, got {mu}")));
                }
                (mu * mu + 0.25 * nf * nf).sqrt()
            }
        };
        let mut p = derive_params(n, m)?;
        // Keep the requested μ exactly; recomputing it through m rounds.
        p.regime = regime;
        p.mu = if regime == Regime::Balanced { 0.0 } else { mu };
        p.r = match regime {
            Regime::Dissipation => 0.5 * (mu - nf),
            _ => -0.5 * nf,
        };
        Ok(p)
    }

    /// Coefficient of `u_t` in the transformed equation.
    pub fn damping(&self) -> f64 {
        match self.regime {
            Regime::Dissipation => self.mu,
            _ => 0.0,
        }
    }

    /// Coefficient of `u` in the transformed equation.
    pub fn mass_term(&self) -> f64 {
        match self.regime {
            Regime::Mass => self.mu * self.mu,
            _ => 0.0,
        }
    }

    /// Factor `e^{(p−1)rt}` multiplying `|u|^p` in the transformed equation.
    pub fn source_factor(&self, p: f64, t: f64) -> f64 {
        ((p - 1.0) * self.r * t).exp()
    }
}

/// Initial data of the transformed problem: `u(0) = f`, `u_t(0) = g − r f`.
pub fn transform_data(f: &[C64], g: &[C64], params: &DerivedParams) -> Result<(Vec<C64>, Vec<C64>)> {
    if f.len() != g.len() {
        return Err(domain("initial data arrays differ in length"));
    }
    let u1 = f.iter().zip(g).map(|(&a, &b)| b - a * params.r).collect();
    Ok((f.to_vec(), u1))
}

/// Recover `(φ, φ_t)` at time `t` from `(u, u_t)`.
pub fn back_transform(u: &[C64], ut: &[C64], t: f64, params: &DerivedParams) -> (Vec<C64>, Vec<C64>) {
    let e = (params.r * t).exp();
    let phi = u.iter().map(|&a| a * e).collect();
    let phit = u.iter().zip(ut).map(|(&a, &b)| (b + a * params.r) * e).collect();
    (phi, phit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classifies_the_worked_examples() {
        let p = derive_params(3, 1.0).unwrap();
        assert_eq!(p.regime, Regime::Dissipation);
        assert!((p.mu - 5f64.sqrt()).abs() < 1e-15);
        assert!((p.r - 0.5 * (5f64.sqrt() - 3.0)).abs() < 1e-15);

        let p = derive_params(3, 1.5).unwrap();
        assert_eq!(p.regime, Regime::Balanced);
        assert_eq!(p.r, -1.5);

        let p = derive_params(2, 2.0).unwrap();
        assert_eq!(p.regime, Regime::Mass);
        assert!((p.mu - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.r, -1.0);

        let p = derive_params(4, 0.0).unwrap();
        assert!(p.massless);
        assert_eq!((p.mu, p.r), (4.0, 0.0));
    }

    #[test]
    fn rejects_negative_mass() {
        assert!(derive_params(2, -0.1).is_err());
        assert!(derive_params(0, 1.0).is_err());
    }

    #[test]
    fn balanced_tolerance_is_absolute() {
        assert_eq!(derive_params(2, 1.0 + 5e-13).unwrap().regime, Regime::Balanced);
        assert_eq!(derive_params(2, 1.0 + 5e-12).unwrap().regime, Regime::Mass);
    }

    proptest! {
        // The reduced coefficients follow from substituting φ = e^{rt}u.
        #[test]
        fn substitution_removes_the_expected_term(n in 1usize..6, m in 0.0f64..6.0) {
            let p = derive_params(n, m).unwrap();
            let nf = n as f64;
            let damping = 2.0 * p.r + nf;
            let mass = p.r * p.r + p.r * nf + m * m;
            prop_assert!((damping - p.damping()).abs() < 1e-9);
            prop_assert!((mass - p.mass_term()).abs() < 1e-9 * (1.0 + m * m));
        }

        #[test]
        fn data_round_trip(f in proptest::collection::vec(-5.0f64..5.0, 1..8), m in 0.0f64..4.0, t in 0.0f64..3.0) {
            let p = derive_params(3, m).unwrap();
            let fc: Vec<C64> = f.iter().map(|&x| C64::new(x, 0.5 * x)).collect();
            let gc: Vec<C64> = f.iter().map(|&x| C64::new(-x, 1.0)).collect();
            let (u0, u1) = transform_data(&fc, &gc, &p).unwrap();
            let (phi, phit) = back_transform(&u0, &u1, 0.0, &p);
            for i in 0..fc.len() {
                prop_assert!((phi[i] - fc[i]).norm() < 1e-12);
                prop_assert!((phit[i] - gc[i]).norm() < 1e-12);
            }
            let (phi_t, _) = back_transform(&u0, &u1, t, &p);
            prop_assert!((phi_t[0] - u0[0] * (p.r * t).exp()).norm() < 1e-12);
        }
    }
}
