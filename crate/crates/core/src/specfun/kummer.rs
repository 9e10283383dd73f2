//! Kummer's `M(b, c, z)` (written `Φ` below) and Tricomi's `U(b, c, z)` (`Ψ`).
//!
//! Inside `|z| <= series_threshold` the power series is summed directly. On the
//! imaginary axis the series terms grow like `e^{|z|}/sqrt(|z|)` while the sum
//! stays of moderate size, so the series loses roughly `e^{|z|}` ulps; beyond
//! the threshold the value and derivative at the threshold are continued along
//! the ray by Taylor steps of Kummer's equation instead.

use num_complex::Complex64 as C64;

use super::gamma::{gamma, recip_gamma};
use crate::error::{domain, Error, Result};

/// Evaluation controls for [`kummer_phi_with`] and [`kummer_psi_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerOptions {
    /// Largest `|z|` summed by the power series.
    pub series_threshold: f64,
    /// Relative truncation tolerance of the Taylor continuation.
    pub ode_tolerance: f64,
    /// Term budget of a single series summation.
    pub max_terms: usize,
}

impl Default for KummerOptions {
    fn default() -> Self {
        Self {
            series_threshold: 5.0,
            ode_tolerance: 1e-14,
            max_terms: 4000,
        }
    }
}

impl KummerOptions {
    fn validate(&self) -> Result<()> {
        if !(self.series_threshold > 0.0) {
            return Err(domain("series_threshold must be positive"));
        }
        if !(self.ode_tolerance > 0.0 && self.ode_tolerance < 1.0) {
            return Err(domain("ode_tolerance must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Longest Taylor step; bounds the `e^{|h|}` cancellation inside one step.
const MAX_STEP: f64 = 2.5;
/// Relative offset used to approach integer `c` in Tricomi's function.
const LIMIT_DELTA: f64 = 2e-3;

fn is_nonpositive_integer(c: C64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.floor()
}

/// Power series for `(Φ, Φ')`.
fn series_pair(b: C64, c: C64, z: C64, max_terms: usize) -> Result<(C64, C64)> {
    if z == C64::new(0.0, 0.0) {
        return Ok((C64::new(1.0, 0.0), b / c));
    }
    let az = z.norm();
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    for k in 0..max_terms {
        let kf = k as f64;
        term = term * (b + kf) * z / ((c + kf) * (kf + 1.0));
        let idx = kf + 1.0;
        sum += term;
        dsum += term * idx;
        if term.norm() == 0.0 {
            return Ok((sum, dsum / z));
        }
        if idx > 2.0 * az + b.norm() + 2.0
            && term.norm() <= 1e-17 * sum.norm()
            && idx * term.norm() <= 1e-17 * dsum.norm().max(f64::MIN_POSITIVE)
        {
            return Ok((sum, dsum / z));
        }
    }
    Err(Error::NoConvergence(format!(
        "Kummer series for b = {b}, c = {c}, z = {z} exceeded {max_terms} terms"
    )))
}

/// One Taylor step of `z w'' + (c − z) w' − b w = 0` from `z0` to `z0 + h`.
fn taylor_step(b: C64, c: C64, z0: C64, w: C64, wp: C64, h: C64, tol: f64) -> Result<(C64, C64)> {
    let mut a_prev = w;
    let mut a_cur = wp * h;
    let mut val = a_prev + a_cur;
    let mut dval = a_cur;
    let h2 = h * h;
    for k in 0..600 {
        let kf = k as f64;
        let next = ((b + kf) * a_prev * h2 - (kf + 1.0) * (c + kf - z0) * a_cur * h) / (z0 * ((kf + 1.0) * (kf + 2.0)));
        val += next;
        dval += next * (kf + 2.0);
        let small = next.norm() + a_cur.norm();
        if k >= 4 && small <= tol * val.norm().max(1e-300) && (kf + 2.0) * small <= tol * dval.norm().max(1e-300) {
            return Ok((val, dval / h));
        }
        if k >= 4 && small == 0.0 {
            return Ok((val, dval / h));
        }
        a_prev = a_cur;
        a_cur = next;
    }
    Err(Error::NoConvergence(format!("Taylor continuation at z = {z0} did not converge")))
}

/// Continue a solution `(w, w')` known at `start` to each target in turn.
/// Targets must be ordered along straight segments that keep away from 0.
fn continue_solution(b: C64, c: C64, start: C64, w: C64, wp: C64, targets: &[C64], tol: f64) -> Result<Vec<(C64, C64)>> {
    let mut z = start;
    let (mut w, mut wp) = (w, wp);
    let mut out = Vec::with_capacity(targets.len());
    for &target in targets {
        loop {
            let gap = target - z;
            let len = gap.norm();
            if len == 0.0 {
                break;
            }
            let step = len.min(MAX_STEP).min(0.5 * z.norm());
            let h = if step >= len { gap } else { gap * (step / len) };
            let (nw, nwp) = taylor_step(b, c, z, w, wp, h, tol)?;
            w = nw;
            wp = nwp;
            z = if step >= len { target } else { z + h };
        }
        out.push((w, wp));
    }
    Ok(out)
}

/// Evaluate a Kummer solution at points sharing a ray from the origin.
/// `local(z)` returns `(w, w')` for `|z| <= threshold`.
fn pairs_on_ray<F>(b: C64, c: C64, zs: &[C64], opts: &KummerOptions, local: F) -> Result<Vec<(C64, C64)>>
where
    F: Fn(C64) -> Result<(C64, C64)>,
{
    opts.validate()?;
    let thr = opts.series_threshold;
    let mut out = vec![(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); zs.len()];
    let mut far: Vec<usize> = Vec::new();
    for (i, &z) in zs.iter().enumerate() {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(domain(format!("non-finite argument {z}")));
        }
        if z.norm() <= thr {
            out[i] = local(z)?;
        } else {
            far.push(i);
        }
    }
    if far.is_empty() {
        return Ok(out);
    }
    far.sort_by(|&i, &j| zs[i].norm().partial_cmp(&zs[j].norm()).unwrap());
    let dir = zs[far[0]] / zs[far[0]].norm();
    let same_ray = far.iter().all(|&i| (zs[i] / zs[i].norm() - dir).norm() < 1e-12);
    if same_ray {
        let anchor = dir * thr;
        let (w, wp) = local(anchor)?;
        let targets: Vec<C64> = far.iter().map(|&i| zs[i]).collect();
        let vals = continue_solution(b, c, anchor, w, wp, &targets, opts.ode_tolerance)?;
        for (k, &i) in far.iter().enumerate() {
            out[i] = vals[k];
        }
    } else {
        for &i in &far {
            let d = zs[i] / zs[i].norm();
            let anchor = d * thr;
            let (w, wp) = local(anchor)?;
            out[i] = continue_solution(b, c, anchor, w, wp, &[zs[i]], opts.ode_tolerance)?[0];
        }
    }
    Ok(out)
}

fn check_phi_args(c: C64) -> Result<()> {
    if is_nonpositive_integer(c) {
        return Err(domain(format!("Kummer Φ has a pole at c = {c}")));
    }
    let nearest = c.re.round();
    if nearest <= 0.0 && (c - nearest).norm() < 1e-6 {
        log::debug!("Kummer Φ evaluated near the pole c = {nearest}; expect conditioning loss");
    }
    Ok(())
}

/// `Φ(b, c, z)` and `Φ'(b, c, z)` at several points on one ray from the origin.
pub fn kummer_phi_pairs_on_ray(b: C64, c: C64, zs: &[C64], opts: &KummerOptions) -> Result<Vec<(C64, C64)>> {
    check_phi_args(c)?;
    pairs_on_ray(b, c, zs, opts, |z| series_pair(b, c, z, opts.max_terms))
}

/// `(Φ(b, c, z), Φ'(b, c, z))`.
pub fn kummer_phi_pair(b: C64, c: C64, z: C64, opts: &KummerOptions) -> Result<(C64, C64)> {
    Ok(kummer_phi_pairs_on_ray(b, c, &[z], opts)?[0])
}

/// Kummer's function `Φ(b, c, z) = Σ (b)_k z^k / ((c)_k k!)` with explicit options.
pub fn kummer_phi_with(b: C64, c: C64, z: C64, opts: &KummerOptions) -> Result<C64> {
    Ok(kummer_phi_pair(b, c, z, opts)?.0)
}

/// Kummer's function `Φ(b, c, z)` with default options.
pub fn kummer_phi(b: C64, c: C64, z: C64) -> Result<C64> {
    kummer_phi_with(b, c, z, &KummerOptions::default())
}

/// `dΦ/dz = (b/c) Φ(b + 1, c + 1, z)`.
pub fn kummer_phi_deriv(b: C64, c: C64, z: C64) -> Result<C64> {
    check_phi_args(c)?;
    Ok(b / c * kummer_phi(b + 1.0, c + 1.0, z)?)
}

/// Tricomi's function and derivative from the two-term connection formula at
/// non-integer `c`.
fn psi_connection(b: f64, c: f64, z: C64, max_terms: usize) -> Result<(C64, C64)> {
    let one = C64::new(1.0, 0.0);
    let mut val = C64::new(0.0, 0.0);
    let mut der = C64::new(0.0, 0.0);
    let first = gamma(1.0 - c) * recip_gamma(b - c + 1.0);
    if first != 0.0 {
        let (m, mp) = series_pair(one * b, one * c, z, max_terms)?;
        val += m * first;
        der += mp * first;
    }
    let second = gamma(c - 1.0) * recip_gamma(b);
    if second != 0.0 {
        let (m, mp) = series_pair(one * (b - c + 1.0), one * (2.0 - c), z, max_terms)?;
        let zp = z.powc(one * (1.0 - c));
        val += zp * m * second;
        der += zp * (m * (1.0 - c) / z + mp) * second;
    }
    Ok((val, der))
}

/// Tricomi's function near the origin; integer `c` is reached as a limit
/// (symmetric average in `c ± δ` with one Richardson step in `δ²`).
fn psi_local(b: f64, c: f64, z: C64, max_terms: usize) -> Result<(C64, C64)> {
    if z == C64::new(0.0, 0.0) {
        return Err(domain("Tricomi Ψ is singular at z = 0"));
    }
    let nearest = c.round();
    if (c - nearest).abs() > 1e-9 {
        return psi_connection(b, c, z, max_terms);
    }
    let sym = |d: f64| -> Result<(C64, C64)> {
        let (v1, d1) = psi_connection(b, nearest + d, z, max_terms)?;
        let (v2, d2) = psi_connection(b, nearest - d, z, max_terms)?;
        Ok(((v1 + v2) * 0.5, (d1 + d2) * 0.5))
    };
    let (v_full, d_full) = sym(LIMIT_DELTA)?;
    let (v_half, d_half) = sym(0.5 * LIMIT_DELTA)?;
    Ok(((v_half * 4.0 - v_full) / 3.0, (d_half * 4.0 - d_full) / 3.0))
}

/// `Ψ(b, c, z)` and `Ψ'(b, c, z)` at several points on one ray from the origin.
pub fn kummer_psi_pairs_on_ray(b: f64, c: f64, zs: &[C64], opts: &KummerOptions) -> Result<Vec<(C64, C64)>> {
    if zs.iter().any(|z| z.norm() == 0.0) {
        return Err(domain("Tricomi Ψ is singular at z = 0"));
    }
    let bc = C64::new(b, 0.0);
    let cc = C64::new(c, 0.0);
    pairs_on_ray(bc, cc, zs, opts, |z| psi_local(b, c, z, opts.max_terms))
}

/// `(Ψ(b, c, z), Ψ'(b, c, z))`.
pub fn kummer_psi_pair(b: f64, c: f64, z: C64, opts: &KummerOptions) -> Result<(C64, C64)> {
    Ok(kummer_psi_pairs_on_ray(b, c, &[z], opts)?[0])
}

/// Tricomi's confluent hypergeometric function `Ψ(b, c, z)` (principal branch)
/// with explicit options.
///
/// Normalisation: `Ψ(b, c, z) → Γ(1−c)/Γ(b−c+1)` as `z → 0` for `c < 1`, and
/// `W(z^{1−c}Φ(b−c+1, 2−c, z), Ψ) = −Γ(2−c)/Γ(b−c+1) z^{−c} e^z`.
pub fn kummer_psi_with(b: f64, c: f64, z: C64, opts: &KummerOptions) -> Result<C64> {
    Ok(kummer_psi_pair(b, c, z, opts)?.0)
}

/// Tricomi's function `Ψ(b, c, z)` with default options.
pub fn kummer_psi(b: f64, c: f64, z: C64) -> Result<C64> {
    kummer_psi_with(b, c, z, &KummerOptions::default())
}
