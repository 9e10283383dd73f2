//! `v'' + |ξ|² e^{−2t} v + μ v' = 0`.
//!
//! In `τ = |ξ| e^{−t}` this is `v_ττ + (1−μ)/τ v_τ + v = 0`; with
//! `w(z) = e^{z/2} v` and `z = 2iτ` it becomes Kummer's equation with
//! `b = (1−μ)/2`, `c = 1−μ`.

use num_complex::Complex64 as C64;

use super::{combine, kernel_path, KernelOptions, KernelPath};
use crate::error::Result;
use crate::specfun::{gamma, kummer_phi_pairs_on_ray, kummer_psi_pairs_on_ray};
use crate::transforms::Regime;

const I: C64 = C64 { re: 0.0, im: 1.0 };

pub(super) fn eval(mu: f64, t: f64, s: f64, xi: f64, opts: &KernelOptions) -> Result<[C64; 4]> {
    let path = kernel_path(Regime::Dissipation, mu, xi, opts);
    if xi == 0.0 {
        let decay = (-mu * (t - s)).exp();
        return Ok([1.0, -(decay - 1.0) / mu, 0.0, decay].map(|x| C64::new(x, 0.0)));
    }
    let tau0 = xi * (-s).exp();
    let tau = xi * (-t).exp();
    if path == KernelPath::ClosedForm {
        let theta = tau0 - tau;
        let (sn, cs) = theta.sin_cos();
        return Ok([cs, sn / tau0, -tau * sn, cs * tau / tau0].map(|x| C64::new(x, 0.0)));
    }
    let z0 = C64::new(0.0, 2.0 * tau0);
    let z = C64::new(0.0, 2.0 * tau);
    let zs = [z, z0];
    let kopts = &opts.kummer;

    // Second basis function z^μ Φ((1+μ)/2, 1+μ, z), shared by both paths.
    let m = if path == KernelPath::KummerPsiPair { mu.round() } else { mu };
    let upper = kummer_phi_pairs_on_ray(C64::new(0.5 * (1.0 + m), 0.0), C64::new(1.0 + m, 0.0), &zs, kopts)?;
    let power = |zz: C64, (f, fp): (C64, C64)| {
        let zp = zz.powf(m);
        (zp * f, zp * (f * m / zz + fp))
    };
    let w2_z = power(z, upper[0]);
    let w2_z0 = power(z0, upper[1]);

    let (basis_z, basis_z0, wr) = if path == KernelPath::KummerPsiPair {
        // Integer μ: Φ((1−μ)/2, 1−μ, ·) does not exist; use Tricomi's Ψ.
        let c = 1.0 - m;
        let b = 0.5 * c;
        let psi = kummer_psi_pairs_on_ray(b, c, &zs, kopts)?;
        let wr = -z0.powf(m - 1.0) * z0.exp() * (gamma(1.0 + m) / gamma(0.5 * (1.0 + m)));
        ([w2_z, psi[0]], [w2_z0, psi[1]], wr)
    } else {
        let lower = kummer_phi_pairs_on_ray(C64::new(0.5 * (1.0 - m), 0.0), C64::new(1.0 - m, 0.0), &zs, kopts)?;
        let wr = z0.powf(m - 1.0) * z0.exp() * m;
        ([lower[0], w2_z], [lower[1], w2_z0], wr)
    };

    // Data at z0 from v(τ0) = φ̂, v_τ(τ0) = −ψ̂/τ0.
    let e0 = C64::from_polar(1.0, tau0);
    let data = [(e0, e0 * 0.5), (C64::new(0.0, 0.0), e0 * 0.5 * I / tau0)];
    let cols = combine(basis_z0, basis_z, wr, data);
    let e = C64::from_polar(1.0, -tau);
    let out = cols.map(|(w, wp)| (e * w, I * tau * e * (w - wp * 2.0)));
    Ok([out[0].0, out[1].0, out[0].1, out[1].1])
}
