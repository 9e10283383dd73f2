//! `v'' + |ξ|² e^{−2t} v = 0`: Bessel's equation of order zero in `τ = |ξ| e^{−t}`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::specfun::bessel_j0y0;

pub(super) fn eval(t: f64, s: f64, xi: f64) -> Result<[C64; 4]> {
    if xi == 0.0 {
        return Ok([1.0, t - s, 0.0, 1.0].map(|x| C64::new(x, 0.0)));
    }
    let tau0 = xi * (-s).exp();
    let tau = xi * (-t).exp();
    let a = bessel_j0y0(tau0)?;
    let b = bessel_j0y0(tau)?;
    let k0 = FRAC_PI_2 * tau0 * (a.y0p * b.j0 - a.j0p * b.y0);
    let dt_k0 = -tau * FRAC_PI_2 * tau0 * (a.y0p * b.j0p - a.j0p * b.y0p);
    let k1 = FRAC_PI_2 * (a.y0 * b.j0 - a.j0 * b.y0);
    let dt_k1 = -tau * FRAC_PI_2 * (a.y0 * b.j0p - a.j0 * b.y0p);
    Ok([k0, k1, dt_k0, dt_k1].map(|x| C64::new(x, 0.0)))
}
