//! Command-line driver: kernel verification, simulation, decay fits, the
//! exponent landscape and the inequality checks.
//!
//! Exit codes: 0 success, 1 other failure, 2 configuration or input error,
//! 3 tolerance or verdict failure, 4 numerical blow-up.

mod json;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use desitter::config::ExperimentConfig;
use desitter::estimates::{
    critical_exponents, critical_verdict, exponent_landscape, fit_decay_rate, theoretical_rate, Channel, DecayReport,
    ExponentBounds, Family, Setting, TheoremId, Verdict,
};
use desitter::inequalities::{standard_suite, SuiteEntry, SuiteOptions};
use desitter::kernels::verify::{basis_pair, oracle_equivalence, wronskian_check, BasisPair, OracleCheck, SampleBox, WronskianCheck};
use desitter::kernels::KernelPath;
use desitter::spectral::io::{write_snapshot, Table, TrajectoryWriter};
use desitter::spectral::{duhamel_solve_with, transformed_gaussian_data};
use desitter::{Error, Regime};

#[derive(Parser)]
#[command(name = "desitter", version, about = "Semilinear Klein-Gordon equation in de Sitter spacetime")]
struct Cli {
    /// TOML experiment configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `outputs` of the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ensemble seed, overriding `seed` of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pass/fail tolerance of the command, overriding its default.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the multipliers with the ODE oracle and check the Wronskians.
    VerifyKernels {
        /// Random samples per regime.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Solve the configured problem and write the trajectory table.
    Simulate,
    /// Fit the decay rate of a trajectory table and compare with theory.
    DecayFit {
        /// Trajectory CSV written by `simulate`.
        #[arg(long)]
        trajectory: PathBuf,
        /// Fit `log(‖·‖ / (1 + t))`.
        #[arg(long)]
        log_correction: bool,
    },
    /// Admissible exponents of the effective setting with unit damping.
    Landscape {
        /// Spatial dimension; defaults to `model.n` of the configuration.
        #[arg(long)]
        n: Option<usize>,
        /// Print the landscape as JSON instead of a text table.
        #[arg(long)]
        json: bool,
    },
    /// Run the harmonic-analysis inequality checks over a seeded ensemble.
    CheckInequalities,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Domain(_) | Error::Hypothesis(_) => 2,
            Error::BlowUp { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.outputs = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tolerance {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Config(format!("--tolerance must be positive, got {tol}")).into());
        }
    }
    match &cli.command {
        Command::VerifyKernels { samples } => verify_kernels(&cfg, *samples, cli.tolerance),
        Command::Simulate => simulate(&cfg),
        Command::DecayFit {
            trajectory,
            log_correction,
        } => decay_fit(&cfg, trajectory, *log_correction, cli.tolerance),
        Command::Landscape { n, json } => landscape(n.unwrap_or(cfg.model.n), *json),
        Command::CheckInequalities => check_inequalities(&cfg, cli.tolerance),
    }
}

/// Print a report and store it as `<name>.json` in the output directory.
fn emit<T: Serialize>(dir: &Path, name: &str, report: &T) -> Result<(), Failure> {
    let text = json::to_string(report).map_err(Error::from)?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{name}.json")), format!("{text}\n"))?;
    print_stdout(&text)
}

/// Print to stdout, treating a closed pipe as success.
fn print_stdout(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

const STANDARD_REGIMES: [(Regime, f64); 8] = [
    (Regime::Dissipation, 0.5),
    (Regime::Dissipation, 1.0),
    (Regime::Dissipation, 1.5),
    (Regime::Dissipation, 2.0),
    (Regime::Dissipation, 2.5),
    (Regime::Mass, 0.7),
    (Regime::Mass, 1.3229),
    (Regime::Balanced, 0.0),
];

const ORACLE_TOLERANCE: f64 = 1e-6;
const ASYMPTOTIC_TOLERANCE: f64 = 1e-4;
const WRONSKIAN_TOLERANCE: f64 = 1e-8;
const WRONSKIAN_SAMPLES: usize = 64;
/// `z = 2iτ` with `τ = |ξ| e^{−t}` up to the largest sampled frequency.
const WRONSKIAN_RANGE: (f64, f64) = (1e-2, 80.0);

#[derive(Serialize)]
struct ConfiguredKernel {
    regime: Regime,
    mu: f64,
    path: KernelPath,
    wronskian: Option<WronskianCheck>,
}

#[derive(Serialize)]
struct VerifyReport {
    samples_per_regime: usize,
    tolerance: f64,
    asymptotic_tolerance: f64,
    wronskian_tolerance: f64,
    oracle: Vec<OracleCheck>,
    wronskian: Vec<WronskianCheck>,
    configured: ConfiguredKernel,
    worst_oracle_error: f64,
    worst_wronskian_residual: f64,
    pass: bool,
}

fn verify_kernels(cfg: &ExperimentConfig, samples: usize, tolerance: Option<f64>) -> Outcome {
    let tol = tolerance.unwrap_or(ORACLE_TOLERANCE);
    let params = cfg.params()?;
    let mut regimes = STANDARD_REGIMES.to_vec();
    if !regimes.contains(&(params.regime, params.mu)) {
        regimes.push((params.regime, params.mu));
    }
    let oracle = regimes
        .iter()
        .map(|&(regime, mu)| oracle_equivalence(regime, mu, samples, cfg.seed, SampleBox::default()))
        .collect::<Result<Vec<_>, _>>()?;

    let (lo, hi) = WRONSKIAN_RANGE;
    let mut pairs = vec![
        (BasisPair::Dissipation, 0.5),
        (BasisPair::Dissipation, 1.5),
        (BasisPair::Dissipation, 2.5),
        (BasisPair::DissipationPsi, 2.0),
        (BasisPair::Mass, 0.7),
        (BasisPair::Mass, 1.3229),
        (BasisPair::Bessel, 0.0),
    ];
    let own = basis_pair(params.regime, params.mu).map(|pair| (pair, params.mu));
    if let Some(p) = own {
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    let wronskian = pairs
        .iter()
        .map(|&(pair, mu)| wronskian_check(pair, mu, WRONSKIAN_SAMPLES, lo, hi))
        .collect::<Result<Vec<_>, _>>()?;
    let configured = ConfiguredKernel {
        regime: params.regime,
        mu: params.mu,
        path: oracle.iter().find(|c| (c.regime, c.mu) == (params.regime, params.mu)).map(|c| c.path).expect("configured regime checked"),
        wronskian: own.and_then(|p| wronskian.iter().find(|w| (w.pair, w.mu) == p).cloned()),
    };
    let worst_oracle_error = oracle.iter().map(|c| c.max_error).fold(0.0, nan_max);
    let worst_wronskian_residual = wronskian.iter().map(|w| w.max_residual).fold(0.0, nan_max);
    let pass = oracle.iter().all(|c| c.passes(tol, ASYMPTOTIC_TOLERANCE))
        && wronskian.iter().all(|w| w.max_residual <= WRONSKIAN_TOLERANCE);
    let report = VerifyReport {
        samples_per_regime: samples,
        tolerance: tol,
        asymptotic_tolerance: ASYMPTOTIC_TOLERANCE,
        wronskian_tolerance: WRONSKIAN_TOLERANCE,
        oracle,
        wronskian,
        configured,
        worst_oracle_error,
        worst_wronskian_residual,
        pass,
    };
    emit(&cfg.outputs, "verify-kernels", &report)?;
    Ok(if pass { 0 } else { 3 })
}

/// Maximum that propagates NaN.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[derive(Serialize)]
struct Resolved {
    n: usize,
    m: f64,
    p: f64,
    regime: Regime,
    mu: f64,
    r: f64,
}

#[derive(Serialize)]
struct SimulateReport {
    model: Resolved,
    bounds: Option<ExponentBounds>,
    verdict: Option<String>,
    verdict_detail: Option<Verdict>,
    trajectory: PathBuf,
    snapshots: Vec<PathBuf>,
    steps: usize,
    final_time: f64,
    final_norms: Vec<(String, f64)>,
    blow_up: Option<String>,
}

fn simulate(cfg: &ExperimentConfig) -> Outcome {
    let params = cfg.params()?;
    let p = cfg.model.p;
    let bounds = Setting::of(&params)
        .and_then(|s| TheoremId::new(s, Family::Energy))
        .and_then(|t| critical_exponents(&params, 1.0, t).ok());
    let verdict = critical_verdict(&params, p).ok();
    fs::create_dir_all(&cfg.outputs)?;
    let csv_path = cfg.outputs.join("trajectory.csv");
    let mut writer = TrajectoryWriter::create(&csv_path, &cfg.gammas)?;
    let snap_dir = cfg.outputs.join("snapshots");
    if cfg.snapshot_every.is_some() {
        fs::create_dir_all(&snap_dir)?;
    }
    let (u0, u1) = transformed_gaussian_data(cfg.grid, cfg.solver.epsilon, &params)?;
    let mut snapshots = Vec::new();
    let mut last = (0usize, 0.0, Vec::new());
    let mut step = 0usize;
    let result = duhamel_solve_with(&u0, &u1, &params, cfg.source(), &cfg.solver, |state| {
        let row = writer.push(&state, &params)?;
        if let Some(every) = cfg.snapshot_every {
            if step.is_multiple_of(every) {
                let path = snap_dir.join(format!("phi_{step:06}.bin"));
                let (phi, _) = state.to_phi(&params);
                write_snapshot(std::io::BufWriter::new(fs::File::create(&path)?), &phi)?;
                snapshots.push(path);
            }
        }
        last = (step, state.t, row);
        step += 1;
        Ok(())
    });
    writer.finish()?;
    let blow_up = match result {
        Ok(()) => None,
        Err(e @ Error::BlowUp { .. }) => Some(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let headers = desitter::spectral::io::trajectory_header(&cfg.gammas);
    let report = SimulateReport {
        model: Resolved {
            n: params.n,
            m: cfg.model.m,
            p,
            regime: params.regime,
            mu: params.mu,
            r: params.r,
        },
        bounds,
        verdict: verdict.as_ref().map(|v| v.to_string()),
        verdict_detail: verdict,
        trajectory: csv_path,
        snapshots,
        steps: last.0,
        final_time: last.1,
        final_norms: headers.into_iter().skip(1).zip(last.2.into_iter().skip(1)).collect(),
        blow_up,
    };
    let code = if report.blow_up.is_some() { 4 } else { 0 };
    emit(&cfg.outputs, "simulate", &report)?;
    if let Some(msg) = &report.blow_up {
        eprintln!("error: {msg}");
    }
    Ok(code)
}

#[derive(Serialize)]
struct DecayFitReport {
    regime: Regime,
    mu: f64,
    gamma: f64,
    channel: Channel,
    column: String,
    tolerance: f64,
    log_correction: bool,
    theory_log_correction: bool,
    fit: DecayReport,
    pass: bool,
}

fn decay_fit(cfg: &ExperimentConfig, trajectory: &Path, log_flag: bool, tolerance: Option<f64>) -> Outcome {
    let params = cfg.params()?;
    let d = &cfg.decay;
    let tol = tolerance.unwrap_or(d.tolerance);
    let log_correction = log_flag || d.log_correction;
    let table = Table::read(trajectory)?;
    let column = match d.channel {
        Channel::Solution => format!("phi_H{}", d.gamma),
        Channel::Derivative => format!("phit_H{}", d.gamma - 1.0),
    };
    let times = table.column("t")?;
    let norms = table.column(&column)?;
    let theory = theoretical_rate(&params, d.gamma, d.channel, d.data_class)?;
    let window = d.window.map(|[a, b]| (a, b));
    let fit = fit_decay_rate(&times, &norms, window, log_correction)?.with_theory(theory.rate);
    let pass = fit.passes(tol).unwrap_or(false);
    let report = DecayFitReport {
        regime: params.regime,
        mu: params.mu,
        gamma: d.gamma,
        channel: d.channel,
        column,
        tolerance: tol,
        log_correction,
        theory_log_correction: theory.log_correction,
        fit,
        pass,
    };
    emit(&cfg.outputs, "decay-fit", &report)?;
    eprintln!(
        "{}: fitted {:.4}, theory {:.4}, tolerance {tol}",
        if pass { "pass" } else { "fail" },
        report.fit.fitted_rate,
        theory.rate
    );
    Ok(if pass { 0 } else { 3 })
}

fn landscape(n: usize, as_json: bool) -> Outcome {
    let l = exponent_landscape(n)?;
    if as_json {
        print_stdout(&json::to_string(&l).map_err(Error::from)?)?;
    } else {
        print_stdout(l.to_text().trim_end())?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct InequalityRun {
    seed: u64,
    samples: usize,
    alpha: f64,
    grid: desitter::spectral::GridSpec,
    tolerance: Option<f64>,
    checks: Vec<SuiteEntry>,
    pass: bool,
}

fn check_inequalities(cfg: &ExperimentConfig, tolerance: Option<f64>) -> Outcome {
    let q = &cfg.inequalities;
    let checks = standard_suite(&SuiteOptions {
        grid: q.grid,
        seed: cfg.seed,
        samples: q.samples,
        alpha: q.alpha,
    })?;
    let pass = checks.iter().all(|c| {
        c.report
            .as_ref()
            .is_none_or(|r| r.is_finite() && tolerance.is_none_or(|t| r.max_ratio <= t))
    });
    let run = InequalityRun {
        seed: cfg.seed,
        samples: q.samples,
        alpha: q.alpha,
        grid: q.grid,
        tolerance,
        checks,
        pass,
    };
    emit(&cfg.outputs, "check-inequalities", &run)?;
    Ok(if pass { 0 } else { 3 })
}
