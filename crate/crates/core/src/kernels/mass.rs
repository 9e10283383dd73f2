//! `v'' + |ξ|² e^{−2t} v + μ² v = 0`.
//!
//! In `τ = |ξ| e^{−t}`: `v_ττ + v_τ/τ + (1 + μ²/τ²) v = 0`. Writing
//! `v = τ^{iμ} e^{−iτ} w(z)` with `z = 2iτ` gives Kummer's equation with
//! `b = (1+2iμ)/2`, `c = 1+2iμ`.

use num_complex::Complex64 as C64;

use super::{combine, KernelOptions};
use crate::error::Result;
use crate::specfun::kummer_phi_pairs_on_ray;

const I: C64 = C64 { re: 0.0, im: 1.0 };

pub(super) fn eval(mu: f64, t: f64, s: f64, xi: f64, opts: &KernelOptions) -> Result<[C64; 4]> {
    if xi == 0.0 {
        let (sn, cs) = (mu * (t - s)).sin_cos();
        return Ok([cs, sn / mu, -mu * sn, cs].map(|x| C64::new(x, 0.0)));
    }
    let tau0 = xi * (-s).exp();
    let tau = xi * (-t).exp();
    let z0 = C64::new(0.0, 2.0 * tau0);
    let z = C64::new(0.0, 2.0 * tau);
    let zs = [z, z0];
    let rho = I * mu;
    let i2mu = I * (2.0 * mu);

    let first = kummer_phi_pairs_on_ray((i2mu + 1.0) * 0.5, i2mu + 1.0, &zs, &opts.kummer)?;
    let raw = kummer_phi_pairs_on_ray((-i2mu + 1.0) * 0.5, -i2mu + 1.0, &zs, &opts.kummer)?;
    let power = |zz: C64, (f, fp): (C64, C64)| {
        let zp = zz.powc(-i2mu);
        (zp * f, zp * (f * (-i2mu) / zz + fp))
    };
    let basis_z = [first[0], power(z, raw[0])];
    let basis_z0 = [first[1], power(z0, raw[1])];
    let wr = -i2mu * z0.powc(-i2mu - 1.0) * z0.exp();

    // Data at z0 from v(τ0) = φ̂, v_τ(τ0) = −ψ̂/τ0.
    let pre = C64::from_polar(1.0, tau0) * C64::new(tau0, 0.0).powc(-rho);
    let data = [
        (pre, pre * 0.5 * (1.0 + I * rho / tau0)),
        (C64::new(0.0, 0.0), pre * 0.5 * I / tau0),
    ];
    let cols = combine(basis_z0, basis_z, wr, data);
    let post = C64::from_polar(1.0, -tau) * C64::new(tau, 0.0).powc(rho);
    let out = cols.map(|(w, wp)| {
        let v = post * w;
        let vt = -post * tau * ((rho / tau - I) * w + I * 2.0 * wp);
        (v, vt)
    });
    Ok([out[0].0, out[1].0, out[0].1, out[1].1])
}
