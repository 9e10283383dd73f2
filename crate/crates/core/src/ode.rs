//! Adaptive Gragg-Bulirsch-Stoer integrator for smooth, non-stiff systems.
//!
//! Each macro step runs the modified midpoint rule with the step sequence
//! 2, 4, 6, ... and extrapolates the results to zero step size with the Neville
//! scheme in `h²`. The step is accepted once two consecutive extrapolation
//! columns agree to the requested tolerance.

use crate::error::{Error, Result};

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 100_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol * 1e-2,
            ..Self::default()
        }
    }
}

const MAX_COLUMNS: usize = 9;

fn substeps(j: usize) -> usize {
    2 * (j + 1)
}

fn midpoint<const N: usize, F>(f: &F, t: f64, y: &[f64; N], dydt: &[f64; N], big_h: f64, n: usize) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = big_h / n as f64;
    let mut prev = *y;
    let mut cur = [0.0; N];
    for i in 0..N {
        cur[i] = y[i] + h * dydt[i];
    }
    for m in 1..n {
        let d = f(t + m as f64 * h, &cur);
        for i in 0..N {
            let next = prev[i] + 2.0 * h * d[i];
            prev[i] = cur[i];
            cur[i] = next;
        }
    }
    let d = f(t + big_h, &cur);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = 0.5 * (cur[i] + prev[i] + h * d[i]);
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(opts.rtol > 0.0) || !(opts.atol >= 0.0) {
        return Err(Error::Domain("ODE tolerances must be positive".into()));
    }
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * span.abs().min(0.1);
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::NoConvergence(format!(
                "integrator exceeded {} steps at t = {t}",
                opts.max_steps
            )));
        }
        steps += 1;
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let dydt = f(t, &y);
        let mut table: Vec<[f64; N]> = Vec::with_capacity(MAX_COLUMNS);
        let mut accepted = None;
        for j in 0..MAX_COLUMNS {
            let nj = substeps(j);
            let mut row = midpoint(&f, t, &y, &dydt, h, nj);
            // Neville extrapolation: table holds the previous diagonal.
            let mut new_table = Vec::with_capacity(j + 1);
            new_table.push(row);
            for k in 1..=j {
                let ratio = (nj as f64 / substeps(j - k) as f64).powi(2);
                let mut next = [0.0; N];
                for i in 0..N {
                    next[i] = row[i] + (row[i] - table[k - 1][i]) / (ratio - 1.0);
                }
                row = next;
                new_table.push(row);
            }
            if j >= 2 {
                let mut err: f64 = 0.0;
                for i in 0..N {
                    let scale = opts.atol + opts.rtol * new_table[j][i].abs().max(y[i].abs());
                    err = err.max((new_table[j][i] - new_table[j - 1][i]).abs() / scale);
                }
                if err <= 1.0 {
                    accepted = Some((new_table[j], j, err));
                    break;
                }
            }
            table = new_table;
        }
        match accepted {
            Some((ynew, j, err)) => {
                t += h;
                y = ynew;
                let exponent = 1.0 / (2 * j + 1) as f64;
                let mut factor = if err > 0.0 { 0.9 * err.powf(-exponent) } else { 4.0 };
                if j >= 6 {
                    factor = factor.min(0.9);
                } else if j <= 3 {
                    factor = factor.max(1.5);
                }
                h *= factor.clamp(0.3, 4.0);
            }
            None => {
                h *= 0.25;
                if h.abs() < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::NoConvergence(format!("step size underflow at t = {t}")));
                }
            }
        }
    }
    Ok(y)
}
