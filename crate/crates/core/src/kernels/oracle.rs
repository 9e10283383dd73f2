//! Reference multipliers by direct integration of the mode ODE in `t`.

use num_complex::Complex64 as C64;

use super::{classify_zone, KernelEval};
use crate::error::{domain, Result};
use crate::ode::{integrate, OdeOptions};
use crate::transforms::Regime;

/// Integrate `v'' + |ξ|² e^{−2t} v + a v' + b v = 0` from `s` to `t` for the
/// data columns `(1, 0)` and `(0, 1)` at relative tolerance `tol`.
pub fn khat_oracle(regime: Regime, mu: f64, t: f64, s: f64, xi: f64, tol: f64) -> Result<KernelEval> {
    if t < s {
        return Err(domain(format!("oracle needs t >= s, got t = {t}, s = {s}")));
    }
    if xi < 0.0 {
        return Err(domain("|ξ| must be non-negative"));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(domain("oracle tolerance must lie in (0, 1)"));
    }
    let (damp, mass) = match regime {
        Regime::Dissipation => (mu, 0.0),
        Regime::Mass => (0.0, mu * mu),
        Regime::Balanced => (0.0, 0.0),
    };
    let xi2 = xi * xi;
    let rhs = |tt: f64, y: &[f64; 4]| {
        let omega = xi2 * (-2.0 * tt).exp() + mass;
        [
            y[1],
            -omega * y[0] - damp * y[1],
            y[3],
            -omega * y[2] - damp * y[3],
        ]
    };
    let opts = OdeOptions {
        rtol: tol,
        atol: tol * 1e-3,
        max_steps: 2_000_000,
    };
    let y = integrate(rhs, s, [1.0, 0.0, 0.0, 1.0], t, &opts)?;
    Ok(KernelEval {
        k0: C64::new(y[0], 0.0),
        k1: C64::new(y[2], 0.0),
        dt_k0: C64::new(y[1], 0.0),
        dt_k1: C64::new(y[3], 0.0),
        zone: classify_zone(t, s, xi, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_halving_is_self_consistent() {
        for (regime, mu) in [(Regime::Dissipation, 1.5), (Regime::Mass, 0.7), (Regime::Balanced, 0.0)] {
            let a = khat_oracle(regime, mu, 5.0, 0.5, 30.0, 1e-9).unwrap();
            let b = khat_oracle(regime, mu, 5.0, 0.5, 30.0, 5e-10).unwrap();
            assert!((a.k0 - b.k0).norm() < 1e-9);
            assert!((a.k1 - b.k1).norm() < 1e-9);
        }
    }

    #[test]
    fn undamped_massless_mode_at_zero_frequency() {
        let k = khat_oracle(Regime::Balanced, 0.0, 3.0, 1.0, 0.0, 1e-12).unwrap();
        assert!((k.k1.re - 2.0).abs() < 1e-12);
    }
}
