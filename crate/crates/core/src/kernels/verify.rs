//! Self-checks of the multipliers: agreement with the ODE oracle on random
//! samples and the Wronskian identities of the special-function bases.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::audit::SampleLocation;
use super::oracle::khat_oracle;
use super::{kernel, kernel_path, KernelEval, KernelOptions, KernelPath};
use crate::error::Result;
use crate::par;
use crate::specfun::{bessel_j0y0, gamma, kummer_phi_pair, kummer_psi_pair, KummerOptions, BESSEL_SWITCH};
use crate::transforms::Regime;

/// Relative tolerance of the oracle integrations.
pub const ORACLE_TOLERANCE: f64 = 1e-11;

/// Sampling box of [`oracle_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub t_max: f64,
    pub xi_max: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        Self { t_max: 6.0, xi_max: 40.0 }
    }
}

/// Worst disagreement between [`kernel`] and the oracle for one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub regime: Regime,
    pub mu: f64,
    pub path: KernelPath,
    pub samples: usize,
    /// Largest error over samples evaluated by convergent expansions.
    pub max_error: f64,
    pub worst: SampleLocation,
    /// Samples that used the large-argument Bessel expansion.
    pub asymptotic_samples: usize,
    pub max_asymptotic_error: f64,
}

impl OracleCheck {
    pub fn passes(&self, tol: f64, asymptotic_tol: f64) -> bool {
        self.max_error <= tol && self.max_asymptotic_error <= asymptotic_tol
    }
}

/// Channel errors relative to the size of the oracle column they belong to.
///
/// A column `(k, ∂t k)` can vanish in one entry while the other is of order
/// one, so each entry is measured against the column norm.
pub fn column_error(a: &KernelEval, b: &KernelEval) -> f64 {
    let c0 = b.k0.norm().hypot(b.dt_k0.norm());
    let c1 = b.k1.norm().hypot(b.dt_k1.norm());
    [
        (a.k0 - b.k0).norm() / c0,
        (a.dt_k0 - b.dt_k0).norm() / c0,
        (a.k1 - b.k1).norm() / c1,
        (a.dt_k1 - b.dt_k1).norm() / c1,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Compare [`kernel`] with [`khat_oracle`] at `samples` uniform points
/// `t ∈ [0, t_max]`, `s ∈ [0, t]`, `|ξ| ∈ [0, ξ_max]`.
pub fn oracle_equivalence(regime: Regime, mu: f64, samples: usize, seed: u64, region: SampleBox) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<SampleLocation> = (0..samples)
        .map(|_| {
            let t = rng.gen_range(0.0..=region.t_max);
            let s = rng.gen_range(0.0..=t);
            let xi = rng.gen_range(0.0..=region.xi_max);
            SampleLocation { t, s, xi }
        })
        .collect();
    let errors = par::try_map(&points, |q| -> Result<(f64, bool)> {
        let a = kernel(regime, mu, q.t, q.s, q.xi)?;
        let b = khat_oracle(regime, mu, q.t, q.s, q.xi, ORACLE_TOLERANCE)?;
        let asymptotic = regime == Regime::Balanced && q.xi > 0.0 && q.xi * (-q.s).exp() > BESSEL_SWITCH;
        Ok((column_error(&a, &b), asymptotic))
    })?;
    let mut check = OracleCheck {
        regime,
        mu,
        path: kernel_path(regime, mu, 1.0, &KernelOptions::default()),
        samples,
        max_error: 0.0,
        worst: SampleLocation { t: 0.0, s: 0.0, xi: 0.0 },
        asymptotic_samples: 0,
        max_asymptotic_error: 0.0,
    };
    for (q, (e, asymptotic)) in points.iter().zip(errors) {
        if asymptotic {
            check.asymptotic_samples += 1;
            check.max_asymptotic_error = check.max_asymptotic_error.max(e);
        }
        // NaN compares false, so route it through explicitly.
        if !asymptotic && (e > check.max_error || e.is_nan()) {
            check.max_error = e;
            check.worst = *q;
        }
    }
    Ok(check)
}

/// Which basis pair a [`WronskianCheck`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisPair {
    /// `Φ((1−μ)/2, 1−μ, z)`, `z^μ Φ((1+μ)/2, 1+μ, z)`: Wronskian `μ z^{μ−1} e^z`.
    Dissipation,
    /// `z^μ Φ((1+μ)/2, 1+μ, z)`, `Ψ((1−μ)/2, 1−μ, z)` for integer `μ`.
    DissipationPsi,
    /// `Φ(1/2 + iμ, 1 + 2iμ, z)`, `z^{−2iμ} Φ(1/2 − iμ, 1 − 2iμ, z)`: `−2iμ z^{−2iμ−1} e^z`.
    Mass,
    /// `J0`, `Y0`: Wronskian `2/(πτ)`.
    Bessel,
}

/// Largest relative Wronskian residual of one basis pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WronskianCheck {
    pub pair: BasisPair,
    pub mu: f64,
    pub samples: usize,
    pub max_residual: f64,
    /// `|z|` (or `τ`) of the largest residual.
    pub worst_argument: f64,
}

/// Geometric sample of `[lo, hi]`.
fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let r = (hi / lo).ln() / (count - 1).max(1) as f64;
    (0..count).map(|i| lo * (r * i as f64).exp()).collect()
}

/// `(y, y')` of `z^a Φ(b, c, z)`.
fn power_times_phi(a: C64, b: C64, c: C64, z: C64, opts: &KummerOptions) -> Result<(C64, C64)> {
    let (f, fp) = kummer_phi_pair(b, c, z, opts)?;
    let za = z.powc(a);
    Ok((za * f, za * (f * a / z + fp)))
}

fn residual(pair: BasisPair, mu: f64, y: f64, opts: &KummerOptions) -> Result<f64> {
    let rel = |w: C64, expect: C64| (w - expect).norm() / expect.norm();
    let z = C64::new(0.0, y);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match pair {
        BasisPair::Dissipation => {
            let (w1, w1p) = power_times_phi(zero, one * (1.0 - mu) / 2.0, one * (1.0 - mu), z, opts)?;
            let (w2, w2p) = power_times_phi(one * mu, one * (1.0 + mu) / 2.0, one * (1.0 + mu), z, opts)?;
            Ok(rel(w1 * w2p - w1p * w2, z.powf(mu - 1.0) * z.exp() * mu))
        }
        BasisPair::DissipationPsi => {
            let m = mu.round();
            let c = 1.0 - m;
            let (w2, w2p) = power_times_phi(one * m, one * (1.0 + m) / 2.0, one * (1.0 + m), z, opts)?;
            let (psi, psip) = kummer_psi_pair(c / 2.0, c, z, opts)?;
            let expect = -z.powf(m - 1.0) * z.exp() * (gamma(1.0 + m) / gamma((1.0 + m) / 2.0));
            Ok(rel(w2 * psip - w2p * psi, expect))
        }
        BasisPair::Mass => {
            let i2mu = C64::new(0.0, 2.0 * mu);
            let (w1, w1p) = power_times_phi(zero, (i2mu + 1.0) / 2.0, i2mu + 1.0, z, opts)?;
            let (w2, w2p) = power_times_phi(-i2mu, (-i2mu + 1.0) / 2.0, -i2mu + 1.0, z, opts)?;
            Ok(rel(w1 * w2p - w1p * w2, -i2mu * z.powc(-i2mu - 1.0) * z.exp()))
        }
        BasisPair::Bessel => {
            let v = bessel_j0y0(y)?;
            let expect = 2.0 / (PI * y);
            Ok(((v.j0 * v.y0p - v.j0p * v.y0 - expect) / expect).abs())
        }
    }
}

/// Wronskian residuals at `samples` geometrically spaced arguments `z = iy`
/// (or `τ = y` for Bessel), `y ∈ [lo, hi]`.
pub fn wronskian_check(pair: BasisPair, mu: f64, samples: usize, lo: f64, hi: f64) -> Result<WronskianCheck> {
    let opts = KummerOptions::default();
    let ys = geometric(lo, hi, samples);
    let res = par::try_map(&ys, |&y| residual(pair, mu, y, &opts))?;
    let (worst, max) = res
        .iter()
        .enumerate()
        .fold((0, 0.0), |(wi, wm), (i, &r)| if r > wm || r.is_nan() { (i, r) } else { (wi, wm) });
    Ok(WronskianCheck {
        pair,
        mu,
        samples,
        max_residual: max,
        worst_argument: ys[worst],
    })
}

/// The basis pair [`kernel`] uses for `(regime, μ)`, if any.
pub fn basis_pair(regime: Regime, mu: f64) -> Option<BasisPair> {
    match kernel_path(regime, mu, 1.0, &KernelOptions::default()) {
        KernelPath::ClosedForm => None,
        KernelPath::KummerPair if regime == Regime::Mass => Some(BasisPair::Mass),
        KernelPath::KummerPair => Some(BasisPair::Dissipation),
        KernelPath::KummerPsiPair => Some(BasisPair::DissipationPsi),
        KernelPath::Bessel => Some(BasisPair::Bessel),
    }
}
