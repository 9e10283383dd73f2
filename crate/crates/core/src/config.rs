//! Experiment configuration files.
//!
//! A configuration is a TOML document. Unknown keys are errors at every level,
//! so a misspelt parameter cannot silently fall back to its default.
//!
//! ```toml
//! seed = 7
//! gammas = [1.0]
//! outputs = "out"
//!
//! [model]
//! n = 3
//! m = 1.299038105676658
//! p = 3.0
//!
//! [grid]
//! dim = 1
//! points = 256
//! half_length = 16.0
//!
//! [solver]
//! dt = 0.015625
//! t_end = 10.0
//! picard_max_iters = 20
//! picard_tol = 1e-12
//! epsilon = 0.001
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{Channel, DataClass};
use crate::spectral::{GridSpec, SolverConfig, Source};
use crate::transforms::{derive_params, DerivedParams};

/// `n`, `m` and the power `p` of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub m: f64,
    pub p: f64,
    /// Drop the source term and solve the linear problem.
    #[serde(default)]
    pub linear: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            n: 3,
            m: 1.6875f64.sqrt(),
            p: 3.0,
            linear: false,
        }
    }
}

/// Controls of the decay-rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayConfig {
    /// Regularity of the fitted `H^γ` channel.
    pub gamma: f64,
    pub channel: Channel,
    pub data_class: DataClass,
    /// Fit `log(‖·‖ / (1 + t))` instead of `log ‖·‖`.
    pub log_correction: bool,
    /// Fit window `[t_start, t_end]`; defaults to the last 60% of the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    /// Largest accepted `|fitted − theoretical|`.
    pub tolerance: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            channel: Channel::Solution,
            data_class: DataClass::GInHgammaMinus1,
            log_correction: false,
            window: None,
            tolerance: 0.05,
        }
    }
}

/// Ensemble used by the inequality checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InequalityConfig {
    pub grid: GridSpec,
    pub samples: usize,
    /// Spectral envelope exponent `α` of the random fields.
    pub alpha: f64,
}

impl Default for InequalityConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec {
                dim: 2,
                points: 128,
                half_length: 16.0,
            },
            samples: 100,
            alpha: 1.0,
        }
    }
}

/// Everything one experiment needs; see the module documentation for the format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Write a binary snapshot of `φ` every this many steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(default)]
    pub decay: DecayConfig,
    #[serde(default)]
    pub inequalities: InequalityConfig,
}

fn default_grid() -> GridSpec {
    GridSpec {
        dim: 1,
        points: 256,
        half_length: 16.0,
    }
}

fn default_gammas() -> Vec<f64> {
    vec![1.0]
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::default(),
            grid: default_grid(),
            solver: SolverConfig::default(),
            gammas: default_gammas(),
            outputs: default_outputs(),
            seed: 0,
            snapshot_every: None,
            decay: DecayConfig::default(),
            inequalities: InequalityConfig::default(),
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

impl ExperimentConfig {
    /// Parse and validate a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        if m.n == 0 {
            return Err(invalid("model.n", "must be at least 1"));
        }
        if !(m.m >= 0.0 && m.m.is_finite()) {
            return Err(invalid("model.m", format!("must be finite and non-negative, got {}", m.m)));
        }
        if !(m.p > 1.0 && m.p.is_finite()) {
            return Err(invalid("model.p", format!("must exceed 1, got {}", m.p)));
        }
        self.grid.validate().map_err(|e| invalid("grid", e))?;
        self.solver.validate().map_err(|e| invalid("solver", e))?;
        if let Some(g) = self.gammas.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
            return Err(invalid("gammas", format!("entries must be finite and non-negative, got {g}")));
        }
        if self.snapshot_every == Some(0) {
            return Err(invalid("snapshot_every", "must be positive"));
        }
        let d = &self.decay;
        if !(d.gamma > 0.5 && d.gamma.is_finite()) {
            return Err(invalid("decay.gamma", format!("must exceed 1/2, got {}", d.gamma)));
        }
        if !(d.tolerance > 0.0) {
            return Err(invalid("decay.tolerance", "must be positive"));
        }
        if let Some([a, b]) = d.window {
            if !(a < b) {
                return Err(invalid("decay.window", format!("needs start < end, got [{a}, {b}]")));
            }
        }
        let q = &self.inequalities;
        q.grid.validate().map_err(|e| invalid("inequalities.grid", e))?;
        if q.samples == 0 {
            return Err(invalid("inequalities.samples", "must be positive"));
        }
        if !(q.alpha >= 0.0 && q.alpha.is_finite()) {
            return Err(invalid("inequalities.alpha", format!("must be finite and non-negative, got {}", q.alpha)));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<DerivedParams> {
        derive_params(self.model.n, self.model.m)
    }

    pub fn source(&self) -> Source {
        if self.model.linear {
            Source::Linear
        } else {
            Source::Power { p: self.model.p }
        }
    }
}
