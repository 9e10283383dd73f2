//! Fourier multipliers of the linear solution operators.
//!
//! For fixed `|ξ|` every transformed model reduces to the ODE
//! `v'' + |ξ|² e^{−2t} v + a v' + b v = 0` in `t`, and the solution with data
//! `(v, v')(s) = (φ̂, ψ̂)` is `k0(t, s) φ̂ + k1(t, s) ψ̂`. [`kernel`] evaluates
//! `k0`, `k1` and their `t`-derivatives through confluent hypergeometric or
//! Bessel functions of `τ = |ξ| e^{−t}`; [`oracle::khat_oracle`] integrates
//! the ODE directly and serves as the reference.

pub mod audit;
mod balanced;
mod dissipation;
mod mass;
pub mod oracle;
pub mod verify;
mod zones;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use zones::{classify_zone, Zone};

use crate::error::{domain, Result};
use crate::specfun::KummerOptions;
use crate::transforms::Regime;

/// `k0`, `k1` and their `t`-derivatives at one `(t, s, |ξ|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub k0: C64,
    pub k1: C64,
    pub dt_k0: C64,
    pub dt_k1: C64,
    pub zone: Zone,
}

impl KernelEval {
    /// The real 2×2 propagator `[[k0, k1], [∂t k0, ∂t k1]]`.
    ///
    /// The multipliers solve a real ODE with real data, so their imaginary
    /// parts are rounding residue and are dropped here.
    pub fn real_matrix(&self) -> [[f64; 2]; 2] {
        [[self.k0.re, self.k1.re], [self.dt_k0.re, self.dt_k1.re]]
    }

    /// Largest imaginary part among the four entries.
    pub fn max_imag(&self) -> f64 {
        [self.k0, self.k1, self.dt_k0, self.dt_k1]
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }
}

/// Controls for [`kernel_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub kummer: KummerOptions,
    /// Zone boundary `N` (see [`classify_zone`]).
    pub zone_n: f64,
    /// Distance from an integer below which `μ` is treated as that integer.
    pub integer_tolerance: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            kummer: KummerOptions::default(),
            zone_n: 1.0,
            integer_tolerance: 1e-9,
        }
    }
}

/// Which construction [`kernel_with`] uses for given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelPath {
    /// `|ξ| = 0` or `μ = 1`: elementary functions.
    ClosedForm,
    /// The pair `Φ`, `z^μ Φ` (or its mass analogue).
    KummerPair,
    /// Integer `μ >= 2`: the pair `z^μ Φ`, `Ψ`.
    KummerPsiPair,
    /// Balanced regime: `J0`, `Y0`.
    Bessel,
}

/// Report the construction used for `(regime, μ, |ξ|)`.
pub fn kernel_path(regime: Regime, mu: f64, xi: f64, opts: &KernelOptions) -> KernelPath {
    if xi == 0.0 {
        return KernelPath::ClosedForm;
    }
    match regime {
        Regime::Balanced => KernelPath::Bessel,
        Regime::Mass => KernelPath::KummerPair,
        Regime::Dissipation => {
            let nearest = mu.round();
            if (mu - nearest).abs() <= opts.integer_tolerance {
                if nearest == 1.0 {
                    KernelPath::ClosedForm
                } else {
                    KernelPath::KummerPsiPair
                }
            } else {
                KernelPath::KummerPair
            }
        }
    }
}

fn validate(regime: Regime, mu: f64, t: f64, s: f64, xi: f64) -> Result<()> {
    if !(t.is_finite() && s.is_finite() && xi.is_finite()) {
        return Err(domain("kernel arguments must be finite"));
    }
    if t < s {
        return Err(domain(format!("kernel needs t >= s, got t = {t}, s = {s}")));
    }
    if xi < 0.0 {
        return Err(domain(format!("|ξ| must be non-negative, got {xi}")));
    }
    match regime {
        Regime::Dissipation if !(mu > 0.0) => Err(domain(format!("dissipation needs μ > 0, got {mu}"))),
        Regime::Mass if !(mu > 0.0) => Err(domain(format!("mass regime needs μ > 0, got {mu}"))),
        _ => Ok(()),
    }
}

/// Evaluate the multipliers with explicit options.
pub fn kernel_with(regime: Regime, mu: f64, t: f64, s: f64, xi: f64, opts: &KernelOptions) -> Result<KernelEval> {
    validate(regime, mu, t, s, xi)?;
    let [k0, k1, dt_k0, dt_k1] = match regime {
        Regime::Dissipation => dissipation::eval(mu, t, s, xi, opts)?,
        Regime::Mass => mass::eval(mu, t, s, xi, opts)?,
        Regime::Balanced => balanced::eval(t, s, xi)?,
    };
    Ok(KernelEval {
        k0,
        k1,
        dt_k0,
        dt_k1,
        zone: classify_zone(t, s, xi, opts.zone_n),
    })
}

/// Evaluate the multipliers `k0`, `k1`, `∂t k0`, `∂t k1` at `(t, s, |ξ|)`.
pub fn kernel(regime: Regime, mu: f64, t: f64, s: f64, xi: f64) -> Result<KernelEval> {
    kernel_with(regime, mu, t, s, xi, &KernelOptions::default())
}

/// Combine a two-function basis of Kummer's equation into the two columns.
///
/// `basis_z0`/`basis_z` hold `(y, y')` for both basis functions at `z0`
/// (initial time) and `z` (final time); `wr` is `W(y1, y2)(z0)`; `data` holds
/// `(w, w')` at `z0` for the two columns. Returns `(w, w')` at `z` per column.
pub(crate) fn combine(
    basis_z0: [(C64, C64); 2],
    basis_z: [(C64, C64); 2],
    wr: C64,
    data: [(C64, C64); 2],
) -> [(C64, C64); 2] {
    let [(y1, y1p), (y2, y2p)] = basis_z0;
    let [(u1, u1p), (u2, u2p)] = basis_z;
    data.map(|(w, wp)| {
        let c1 = (w * y2p - wp * y2) / wr;
        let c2 = (y1 * wp - y1p * w) / wr;
        (c1 * u1 + c2 * u2, c1 * u1p + c2 * u2p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reversed_times_and_negative_frequency() {
        assert!(kernel(Regime::Dissipation, 1.5, 0.0, 1.0, 2.0).is_err());
        assert!(kernel(Regime::Mass, 1.0, 1.0, 0.0, -1.0).is_err());
        assert!(kernel(Regime::Dissipation, 0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn identity_at_equal_times() {
        for (regime, mu) in [
            (Regime::Dissipation, 0.5),
            (Regime::Dissipation, 1.0),
            (Regime::Dissipation, 2.0),
            (Regime::Dissipation, 2.5),
            (Regime::Mass, 1.3),
            (Regime::Balanced, 0.0),
        ] {
            for &xi in &[0.0, 0.3, 7.0, 35.0] {
                let k = kernel(regime, mu, 1.2, 1.2, xi).unwrap();
                assert!((k.k0 - 1.0).norm() < 1e-9, "{regime} μ={mu} ξ={xi}: k0 = {}", k.k0);
                assert!(k.k1.norm() < 1e-9, "{regime} μ={mu} ξ={xi}: k1 = {}", k.k1);
                assert!(k.dt_k0.norm() < 1e-8 * (1.0 + xi), "{regime} μ={mu} ξ={xi}: dt_k0 = {}", k.dt_k0);
                assert!((k.dt_k1 - 1.0).norm() < 1e-9, "{regime} μ={mu} ξ={xi}: dt_k1 = {}", k.dt_k1);
            }
        }
    }

    #[test]
    fn unit_damping_closed_form() {
        let xi: f64 = 3.0;
        let t: f64 = 0.8;
        let k = kernel(Regime::Dissipation, 1.0, t, 0.0, xi).unwrap();
        let theta = xi * (1.0 - (-t).exp());
        assert!((k.k1.re - theta.sin() / xi).abs() < 1e-15);
        assert!((k.k0.re - theta.cos()).abs() < 1e-15);
    }

    #[test]
    fn path_selection() {
        let o = KernelOptions::default();
        assert_eq!(kernel_path(Regime::Dissipation, 1.0 + 1e-10, 1.0, &o), KernelPath::ClosedForm);
        assert_eq!(kernel_path(Regime::Dissipation, 1.0 + 1e-4, 1.0, &o), KernelPath::KummerPair);
        assert_eq!(kernel_path(Regime::Dissipation, 2.0, 1.0, &o), KernelPath::KummerPsiPair);
        assert_eq!(kernel_path(Regime::Dissipation, 2.0, 0.0, &o), KernelPath::ClosedForm);
        assert_eq!(kernel_path(Regime::Balanced, 0.0, 1.0, &o), KernelPath::Bessel);
    }
}
