//! Linear evolution, the Duhamel integral and Picard iteration.
//!
//! Time stepping uses the exact two-column propagator of every mode,
//! `M(t_{j+1}, t_j) = [[k0, k1], [∂t k0, ∂t k1]]`, and the trapezoid rule for
//! the Duhamel integral over one step:
//!
//! ```text
//! U_{j+1} = M (U_j + (0, dt/2 · S_j)) + (0, dt/2 · S_{j+1})
//! ```
//!
//! Since the last increment only touches `u_t`, the position `u_{j+1}`, and
//! therefore `S_{j+1}`, is known before it is needed and the scheme is
//! explicit. The local error is `O(dt³)`, the global error `O(dt²)`.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{sobolev_norm_of, FftNd, GridSpec, SpectralField};
use crate::error::{domain, Error, Result};
use crate::kernels::kernel;
use crate::par;
use crate::transforms::{DerivedParams, Regime};

/// Right-hand side of the transformed equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Source {
    /// No source: the linear problem.
    Linear,
    /// `e^{(p−1)rt} |u|^p`.
    Power { p: f64 },
}

/// Time discretisation and iteration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub picard_max_iters: usize,
    pub picard_tol: f64,
    /// Amplitude of the initial data built by [`gaussian_data`].
    pub epsilon: f64,
    /// `‖u‖_{L²}` above this value is reported as blow-up.
    #[serde(default = "default_blowup")]
    pub blowup_threshold: f64,
}

fn default_blowup() -> f64 {
    1e12
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1.0 / 64.0,
            t_end: 10.0,
            picard_max_iters: 20,
            picard_tol: 1e-12,
            epsilon: 1e-3,
            blowup_threshold: default_blowup(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.dt <= self.t_end) {
            return Err(domain(format!("need 0 < dt <= t_end, got dt = {}, t_end = {}", self.dt, self.t_end)));
        }
        if !(self.picard_tol > 0.0 && self.picard_tol < 1.0) {
            return Err(domain(format!("picard_tol must lie in (0, 1), got {}", self.picard_tol)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(domain(format!("epsilon must be finite and non-negative, got {}", self.epsilon)));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(domain("blowup_threshold must be positive"));
        }
        self.steps().map(|_| ())
    }

    /// Number of steps; `t_end` must be a multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let n = (self.t_end / self.dt).round();
        if n < 1.0 || (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(domain(format!("t_end = {} is not a multiple of dt = {}", self.t_end, self.dt)));
        }
        Ok(n as usize)
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// `(u, u_t)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: SpectralField,
    pub ut: SpectralField,
}

impl State {
    /// `(φ, φ_t) = e^{rt} (u, u_t + r u)`.
    pub fn to_phi(&self, params: &DerivedParams) -> (SpectralField, SpectralField) {
        let (phi, phit) = crate::transforms::back_transform(&self.u.coeffs, &self.ut.coeffs, self.t, params);
        (
            SpectralField { grid: self.u.grid, coeffs: phi },
            SpectralField { grid: self.u.grid, coeffs: phit },
        )
    }

    /// Weighted energy of the solution space used by the contraction argument.
    pub fn solution_space_norm(&self, params: &DerivedParams) -> f64 {
        solution_space_norm(params, self.t, &self.u.grid, &self.u.coeffs, &self.ut.coeffs)
    }
}

/// States at every multiple of `dt`, starting with the data at `t = 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&State> {
        self.states.last()
    }
}

/// Modes grouped by `|k|²`, which fixes `|ξ|` and hence the multipliers.
#[derive(Debug, Clone)]
struct ModeTable {
    frequencies: Vec<f64>,
    slot: Vec<usize>,
}

impl ModeTable {
    fn new(grid: &GridSpec) -> Self {
        let k2 = grid.squared_wavenumbers();
        let mut keys: Vec<u64> = k2.clone();
        keys.sort_unstable();
        keys.dedup();
        let index: HashMap<u64, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let b = grid.base_frequency();
        Self {
            frequencies: keys.iter().map(|&k| b * (k as f64).sqrt()).collect(),
            slot: k2.iter().map(|k| index[k]).collect(),
        }
    }

    fn matrices(&self, params: &DerivedParams, t: f64, s: f64) -> Result<Vec<[[f64; 2]; 2]>> {
        par::try_map(&self.frequencies, |&xi| kernel(params.regime, params.mu, t, s, xi).map(|k| k.real_matrix()))
    }
}

fn apply_matrices(table: &ModeTable, m: &[[[f64; 2]; 2]], u: &mut [C64], ut: &mut [C64]) {
    for i in 0..u.len() {
        let a = &m[table.slot[i]];
        let (x, y) = (u[i], ut[i]);
        u[i] = x * a[0][0] + y * a[0][1];
        ut[i] = x * a[1][0] + y * a[1][1];
    }
}

/// Evolve data `(u0, u1)` given at time `s` to time `t` with the linear propagator.
pub fn apply_kernel(
    u0: &SpectralField,
    u1: &SpectralField,
    t: f64,
    s: f64,
    params: &DerivedParams,
) -> Result<(SpectralField, SpectralField)> {
    if u0.grid != u1.grid {
        return Err(domain("position and velocity data live on different grids"));
    }
    let table = ModeTable::new(&u0.grid);
    let m = table.matrices(params, t, s)?;
    let mut u = u0.coeffs.clone();
    let mut ut = u1.coeffs.clone();
    apply_matrices(&table, &m, &mut u, &mut ut);
    Ok((
        SpectralField { grid: u0.grid, coeffs: u },
        SpectralField { grid: u0.grid, coeffs: ut },
    ))
}

/// Pointwise `|u|^p` with 2× zero padding per axis.
#[derive(Debug, Clone)]
struct Dealiaser {
    fine: GridSpec,
    fft: FftNd,
    /// Fine-grid index of every coarse coefficient; `None` at the Nyquist index.
    map: Vec<Option<usize>>,
    sign: Vec<f64>,
}

impl Dealiaser {
    fn new(grid: &GridSpec) -> Self {
        let fine = grid.refined(2);
        let map = (0..grid.len())
            .map(|i| {
                if grid.is_nyquist(i) {
                    None
                } else {
                    fine.flat_index(&grid.wavevector(i)[..grid.dim])
                }
            })
            .collect();
        let sign = (0..fine.len())
            .map(|i| {
                let s: i64 = fine.wavevector(i)[..fine.dim].iter().sum();
                if s.rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        Self {
            fft: FftNd::new(fine.points, fine.dim),
            fine,
            map,
            sign,
        }
    }

    fn power(&self, u: &[C64], p: f64, factor: f64) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); self.fine.len()];
        for (i, slot) in self.map.iter().enumerate() {
            if let Some(j) = slot {
                buf[*j] = u[i] * self.sign[*j];
            }
        }
        self.fft.inverse(&mut buf);
        for v in buf.iter_mut() {
            *v = C64::new(v.re.abs().powf(p), 0.0);
        }
        self.fft.forward(&mut buf);
        let scale = factor / self.fine.len() as f64;
        self.map
            .iter()
            .map(|slot| match slot {
                Some(j) => buf[*j] * (self.sign[*j] * scale),
                None => C64::new(0.0, 0.0),
            })
            .collect()
    }
}

/// Coefficients of `|u|^p` for a real field, dealiased by 2× zero padding.
pub fn power_source(u: &SpectralField, p: f64) -> Result<SpectralField> {
    if !(p > 1.0) {
        return Err(domain(format!("nonlinearity exponent must exceed 1, got {p}")));
    }
    let d = Dealiaser::new(&u.grid);
    Ok(SpectralField {
        grid: u.grid,
        coeffs: d.power(&u.coeffs, p, 1.0),
    })
}

fn check_inputs(u0: &SpectralField, u1: &SpectralField, source: &Source, cfg: &SolverConfig) -> Result<usize> {
    if u0.grid != u1.grid {
        return Err(domain("position and velocity data live on different grids"));
    }
    u0.grid.validate()?;
    if let Source::Power { p } = source {
        if !(*p > 1.0) {
            return Err(domain(format!("nonlinearity exponent must exceed 1, got {p}")));
        }
    }
    cfg.validate()?;
    cfg.steps()
}

fn l2_sq(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

fn check_blowup(grid: &GridSpec, u: &[C64], t: f64, cfg: &SolverConfig) -> Result<()> {
    let norm = (grid.volume() * l2_sq(u)).sqrt();
    if !norm.is_finite() || norm > cfg.blowup_threshold {
        return Err(Error::BlowUp {
            t,
            detail: format!("‖u‖_L2 = {norm:e} exceeds {:e}", cfg.blowup_threshold),
        });
    }
    Ok(())
}

/// Shared stepping loop. `source_at(j, u_j)` returns `S_j` or `None` for no source.
#[allow(clippy::too_many_arguments)]
fn march<F, O>(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &DerivedParams,
    cfg: &SolverConfig,
    steps: usize,
    propagators: Option<&[Vec<[[f64; 2]; 2]>]>,
    mut source_at: F,
    mut observer: O,
) -> Result<()>
where
    F: FnMut(usize, &[C64]) -> Result<Option<Vec<C64>>>,
    O: FnMut(State) -> Result<()>,
{
    let grid = u0.grid;
    let table = ModeTable::new(&grid);
    let mut u = u0.coeffs.clone();
    let mut ut = u1.coeffs.clone();
    observer(State {
        t: 0.0,
        u: u0.clone(),
        ut: u1.clone(),
    })?;
    let mut src = source_at(0, &u)?;
    let half = 0.5 * cfg.dt;
    for j in 0..steps {
        let (t0, t1) = (cfg.time(j), cfg.time(j + 1));
        if let Some(s) = &src {
            for (v, sv) in ut.iter_mut().zip(s) {
                *v += sv * half;
            }
        }
        match propagators {
            Some(all) => apply_matrices(&table, &all[j], &mut u, &mut ut),
            None => {
                let m = table.matrices(params, t1, t0)?;
                apply_matrices(&table, &m, &mut u, &mut ut);
            }
        }
        check_blowup(&grid, &u, t1, cfg)?;
        src = source_at(j + 1, &u)?;
        if let Some(s) = &src {
            for (v, sv) in ut.iter_mut().zip(s) {
                *v += sv * half;
            }
        }
        observer(State {
            t: t1,
            u: SpectralField { grid, coeffs: u.clone() },
            ut: SpectralField { grid, coeffs: ut.clone() },
        })?;
    }
    Ok(())
}

/// Solve `u(t) = K0 u0 + K1 u1 + ∫ K1(t, s) S(u(s)) ds`, passing every state to `observer`.
pub fn duhamel_solve_with<O>(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &DerivedParams,
    source: Source,
    cfg: &SolverConfig,
    observer: O,
) -> Result<()>
where
    O: FnMut(State) -> Result<()>,
{
    let steps = check_inputs(u0, u1, &source, cfg)?;
    match source {
        Source::Linear => march(u0, u1, params, cfg, steps, None, |_, _| Ok(None), observer),
        Source::Power { p } => {
            let d = Dealiaser::new(&u0.grid);
            march(
                u0,
                u1,
                params,
                cfg,
                steps,
                None,
                |j, u| Ok(Some(d.power(u, p, params.source_factor(p, cfg.time(j))))),
                observer,
            )
        }
    }
}

/// [`duhamel_solve_with`] collecting the whole trajectory.
pub fn duhamel_solve(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &DerivedParams,
    source: Source,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    let mut traj = Trajectory::default();
    duhamel_solve_with(u0, u1, params, source, cfg, |s| {
        traj.states.push(s);
        Ok(())
    })?;
    Ok(traj)
}

/// `ε e^{−|x|²}` and `ε e^{−2|x|²}` as position and velocity data.
pub fn gaussian_data(grid: GridSpec, epsilon: f64) -> Result<(SpectralField, SpectralField)> {
    let f = SpectralField::from_fn(grid, move |x| epsilon * (-x.iter().map(|v| v * v).sum::<f64>()).exp())?;
    let g = SpectralField::from_fn(grid, move |x| epsilon * (-2.0 * x.iter().map(|v| v * v).sum::<f64>()).exp())?;
    Ok((f, g))
}

/// [`gaussian_data`] for `(φ, φ_t)` mapped to `(u, u_t)` of the transformed problem.
pub fn transformed_gaussian_data(
    grid: GridSpec,
    epsilon: f64,
    params: &DerivedParams,
) -> Result<(SpectralField, SpectralField)> {
    let (f, g) = gaussian_data(grid, epsilon)?;
    let (u0, u1) = crate::transforms::transform_data(&f.coeffs, &g.coeffs, params)?;
    Ok((SpectralField { grid, coeffs: u0 }, SpectralField { grid, coeffs: u1 }))
}

/// The time-weighted energy whose supremum defines the solution space of
/// the energy-level existence results in each regime.
pub fn solution_space_norm(params: &DerivedParams, t: f64, grid: &GridSpec, u: &[C64], ut: &[C64]) -> f64 {
    let l2 = sobolev_norm_of(grid, u, 0.0, false);
    let grad = sobolev_norm_of(grid, u, 1.0, true);
    let h1 = sobolev_norm_of(grid, u, 1.0, false);
    let vel = sobolev_norm_of(grid, ut, 0.0, false);
    match params.regime {
        Regime::Dissipation if params.mu >= 1.0 => t.exp() * vel + h1,
        Regime::Dissipation => (0.5 * (params.mu - 1.0) * t).exp() * h1 + (params.mu * t).exp() * vel,
        Regime::Mass => (-0.5 * t).exp() * (l2 + grad) + vel,
        Regime::Balanced => (-0.5 * t).exp() / (1.0 + t) * (l2 + grad) + vel,
    }
}

/// Outcome of [`picard_iterate`].
#[derive(Debug, Clone)]
pub struct PicardReport {
    /// `sup_t ‖u^{(k+1)} − u^{(k)}‖` in the solution-space norm, `k = 0, 1, …`.
    pub distances: Vec<f64>,
    /// `distances[k] / distances[k − 1]`.
    pub ratios: Vec<f64>,
    /// Whether the last distance fell below `picard_tol` times the iterate norm.
    pub converged: bool,
    /// The last iterate.
    pub solution: Trajectory,
}

fn sup_distance(params: &DerivedParams, a: &Trajectory, b: &Trajectory) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| {
            let du: Vec<C64> = x.u.coeffs.iter().zip(&y.u.coeffs).map(|(p, q)| p - q).collect();
            let dv: Vec<C64> = x.ut.coeffs.iter().zip(&y.ut.coeffs).map(|(p, q)| p - q).collect();
            solution_space_norm(params, x.t, &x.u.grid, &du, &dv)
        })
        .fold(0.0, f64::max)
}

fn sup_norm(params: &DerivedParams, a: &Trajectory) -> f64 {
    a.states.iter().map(|s| s.solution_space_norm(params)).fold(0.0, f64::max)
}

/// Iterate `u^{(k+1)} = P u^{(k)}` from the linear solution.
///
/// Stops after `picard_max_iters` applications of `P`, or once the distance
/// between iterates falls below `picard_tol` times the iterate norm. Three
/// consecutive ratios above one are reported as [`Error::NoContraction`].
pub fn picard_iterate(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &DerivedParams,
    p: f64,
    cfg: &SolverConfig,
) -> Result<PicardReport> {
    let steps = check_inputs(u0, u1, &Source::Power { p }, cfg)?;
    let table = ModeTable::new(&u0.grid);
    let times: Vec<usize> = (0..steps).collect();
    let propagators = par::try_map(&times, |&j| table.matrices(params, cfg.time(j + 1), cfg.time(j)))?;
    let d = Dealiaser::new(&u0.grid);

    let run = |prev: Option<&Trajectory>| -> Result<Trajectory> {
        let mut traj = Trajectory::default();
        march(
            u0,
            u1,
            params,
            cfg,
            steps,
            Some(&propagators),
            |j, _| {
                Ok(prev.map(|tr| d.power(&tr.states[j].u.coeffs, p, params.source_factor(p, cfg.time(j)))))
            },
            |s| {
                traj.states.push(s);
                Ok(())
            },
        )?;
        Ok(traj)
    };

    let mut current = run(None)?;
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let mut converged = false;
    let mut above_one = 0;
    for _ in 0..cfg.picard_max_iters {
        let next = run(Some(&current))?;
        let dist = sup_distance(params, &next, &current);
        let scale = sup_norm(params, &next);
        if let Some(&last) = distances.last() {
            let ratio: f64 = if last > 0.0 { dist / last } else { 0.0 };
            ratios.push(ratio);
            above_one = if ratio > 1.0 { above_one + 1 } else { 0 };
        }
        distances.push(dist);
        current = next;
        if above_one >= 3 {
            return Err(Error::NoContraction(format!(
                "Picard ratios exceeded 1 three times in a row: {ratios:?}"
            )));
        }
        if dist <= cfg.picard_tol * scale {
            converged = true;
            break;
        }
    }
    Ok(PicardReport {
        distances,
        ratios,
        converged,
        solution: current,
    })
}
