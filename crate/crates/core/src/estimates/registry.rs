//! Global-existence results and their admissible ranges of `p`.
//!
//! Every result is identified by a [`Setting`] (which range of `m` it covers)
//! and a [`Family`] (which data space it uses). The four settings share the
//! same families except that the effective-damping setting has the `p > σ+1`
//! result in place of the low-dimensional one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transforms::{DerivedParams, Regime};

/// Range of the mass covered by a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    /// Dissipation with `μ ∈ [1, n)`.
    Effective,
    /// Dissipation with `μ ∈ (0, 1)`.
    NonEffective,
    /// `m > n/2`.
    Mass,
    /// `m = n/2`.
    Balanced,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::Effective, Setting::NonEffective, Setting::Mass, Setting::Balanced];

    /// The setting that contains `params`, if any.
    pub fn of(params: &DerivedParams) -> Option<Setting> {
        match params.regime {
            Regime::Dissipation if params.massless => None,
            Regime::Dissipation if params.mu >= 1.0 => Some(Setting::Effective),
            Regime::Dissipation => Some(Setting::NonEffective),
            Regime::Mass => Some(Setting::Mass),
            Regime::Balanced => Some(Setting::Balanced),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Setting::Effective => "effective",
            Setting::NonEffective => "non-effective",
            Setting::Mass => "mass",
            Setting::Balanced => "balanced",
        }
    }
}

/// Data space of a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `(f, g) ∈ H¹ × L²`.
    Energy,
    /// `f ∈ H^γ`, `γ ∈ (1/2, 1)`, `g ∈ L²`.
    Fractional,
    /// `H^σ × H^{σ−1}`, `σ ∈ (1, n/2)`, `n ≥ 3`.
    Intermediate,
    /// `H^σ × H^{σ−1}`, `σ ≥ n/2`, `n ≥ 3`, upper bound removed.
    LargeRegularity,
    /// `H^σ × H^{σ−1}`, `σ > n/2`, `p > max{p₀, σ, 2}`.
    HighRegularitySharp,
    /// `H^σ × H^{σ−1}`, `σ > n/2`, `p > σ + 1`.
    HighRegularity,
    /// `σ = 1` for `n = 1`, `σ ∈ (1, 2)` for `n = 2`, `p > σ + 1`.
    LowDimension,
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Family::Energy => "energy",
            Family::Fractional => "fractional",
            Family::Intermediate => "intermediate",
            Family::LargeRegularity => "large-regularity",
            Family::HighRegularitySharp => "high-regularity-sharp",
            Family::HighRegularity => "high-regularity",
            Family::LowDimension => "low-dimension",
        }
    }

    /// Whether the parameter is `γ` rather than `σ`.
    pub fn uses_gamma(self) -> bool {
        self == Family::Fractional
    }
}

/// Identifier of one global-existence result, written `setting-family`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct TheoremId {
    setting: Setting,
    family: Family,
}

impl TheoremId {
    /// Every registered result.
    pub const ALL: [TheoremId; 24] = {
        use Family::*;
        use Setting::*;
        const fn id(setting: Setting, family: Family) -> TheoremId {
            TheoremId { setting, family }
        }
        [
            id(Effective, Energy),
            id(Effective, Fractional),
            id(Effective, Intermediate),
            id(Effective, LargeRegularity),
            id(Effective, HighRegularitySharp),
            id(Effective, HighRegularity),
            id(NonEffective, Energy),
            id(NonEffective, Fractional),
            id(NonEffective, Intermediate),
            id(NonEffective, LargeRegularity),
            id(NonEffective, HighRegularitySharp),
            id(NonEffective, LowDimension),
            id(Mass, Energy),
            id(Mass, Fractional),
            id(Mass, Intermediate),
            id(Mass, LargeRegularity),
            id(Mass, HighRegularitySharp),
            id(Mass, LowDimension),
            id(Balanced, Energy),
            id(Balanced, Fractional),
            id(Balanced, Intermediate),
            id(Balanced, LargeRegularity),
            id(Balanced, HighRegularitySharp),
            id(Balanced, LowDimension),
        ]
    };

    /// The registered result for `(setting, family)`, if there is one.
    pub fn new(setting: Setting, family: Family) -> Option<Self> {
        let id = TheoremId { setting, family };
        Self::ALL.contains(&id).then_some(id)
    }

    pub fn setting(self) -> Setting {
        self.setting
    }

    pub fn family(self) -> Family {
        self.family
    }

    /// Results of one setting, in registry order.
    pub fn of_setting(setting: Setting) -> impl Iterator<Item = TheoremId> {
        Self::ALL.into_iter().filter(move |t| t.setting == setting)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.setting.as_str(), self.family.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.to_string() == s).ok_or_else(|| {
            let known: Vec<String> = Self::ALL.iter().map(|t| t.to_string()).collect();
            Error::Domain(format!("unknown theorem id `{s}`; known ids: {}", known.join(", ")))
        })
    }
}

impl From<TheoremId> for String {
    fn from(t: TheoremId) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for TheoremId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A named lower threshold on `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub threshold: f64,
}

/// Admissible exponents `lower < p ≤ upper` (or `< ∞`) of one result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentBounds {
    pub theorem: TheoremId,
    /// Strict lower bound: the largest of the base threshold and the side conditions.
    pub lower: f64,
    /// `None` stands for `+∞`.
    pub upper: Option<f64>,
    pub upper_inclusive: bool,
    /// Lower thresholds beyond the base exponent, such as `p > ⌈σ⌉`.
    pub extra_conditions: Vec<Condition>,
    /// Set when no `p` satisfies the conditions.
    pub empty: bool,
}

impl ExponentBounds {
    fn new(theorem: TheoremId, base: Option<f64>, extra: Vec<Condition>, upper: Option<f64>, inclusive: bool) -> Self {
        let lower = extra.iter().map(|c| c.threshold).chain(base).fold(1.0, f64::max);
        let empty = upper.is_some_and(|u| u <= lower);
        Self {
            theorem,
            lower,
            upper,
            upper_inclusive: inclusive && upper.is_some(),
            extra_conditions: extra,
            empty,
        }
    }

    pub fn admits(&self, p: f64) -> bool {
        p > self.lower
            && match self.upper {
                None => true,
                Some(u) if self.upper_inclusive => p <= u,
                Some(u) => p < u,
            }
    }
}

impl fmt::Display for ExponentBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            None => write!(f, "({}, ∞)", self.lower)?,
            Some(u) => write!(f, "({}, {}{}", self.lower, u, if self.upper_inclusive { "]" } else { ")" })?,
        }
        if self.empty {
            write!(f, " (empty)")?;
        }
        Ok(())
    }
}

struct Checker<'a> {
    theorem: TheoremId,
    params: &'a DerivedParams,
}

impl Checker<'_> {
    fn require(&self, ok: bool, hypothesis: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "{} requires {hypothesis} (n = {}, m = {}, μ = {})",
                self.theorem, self.params.n, self.params.m, self.params.mu
            )))
        }
    }
}

fn cond(name: &str, threshold: f64) -> Condition {
    Condition {
        name: name.to_string(),
        threshold,
    }
}

/// Admissible range of `p` for `theorem` at `params`.
///
/// `gamma_or_sigma` is the regularity `γ` of the fractional family or `σ` of
/// the others; the energy family ignores it.
pub fn critical_exponents(params: &DerivedParams, gamma_or_sigma: f64, theorem: TheoremId) -> Result<ExponentBounds> {
    let chk = Checker { theorem, params };
    let nf = params.n as f64;
    let mu = params.mu;
    let x = gamma_or_sigma;

    match theorem.setting {
        Setting::Effective | Setting::NonEffective => {
            chk.require(params.regime == Regime::Dissipation, "the dissipation regime m < n/2")?;
            chk.require(!params.massless, "m > 0")?;
            if theorem.setting == Setting::Effective {
                chk.require((1.0..nf).contains(&mu), "μ ∈ [1, n)")?;
            } else {
                chk.require(mu > 0.0 && mu < 1.0, "μ ∈ (0, 1), i.e. m ∈ (√(n²−1)/2, n/2)")?;
            }
        }
        Setting::Mass => chk.require(params.regime == Regime::Mass, "m > n/2")?,
        Setting::Balanced => chk.require(params.regime == Regime::Balanced, "m = n/2")?,
    }
    let effective = theorem.setting == Setting::Effective;
    // Outside the effective setting every threshold is the effective one at μ = 1.
    let mu_eff = if effective { mu } else { 1.0 };
    let base = |gamma: f64| 1.0 + 2.0 * gamma / (nf - mu_eff);

    match theorem.family {
        Family::Energy => {
            chk.require(params.n >= 2, "n ≥ 2")?;
            if effective {
                chk.require(mu < 2.0, "μ ∈ [1, 2)")?;
            }
            let upper = (params.n >= 3).then(|| nf / (nf - 2.0));
            Ok(ExponentBounds::new(theorem, Some(base(1.0)), vec![], upper, true))
        }
        Family::Fractional => {
            chk.require(params.n >= 2, "n ≥ 2")?;
            chk.require(x > 0.5 && x < 1.0, "γ ∈ (1/2, 1)")?;
            if effective {
                chk.require(mu < 2.0 * x, "μ ∈ [1, 2γ)")?;
            }
            Ok(ExponentBounds::new(theorem, Some(base(x)), vec![], Some(nf / (nf - 2.0 * x)), true))
        }
        Family::Intermediate => {
            chk.require(params.n >= 3, "n ≥ 3")?;
            chk.require(x > 1.0 && x < 0.5 * nf, "σ ∈ (1, n/2)")?;
            if effective {
                chk.require(mu < 2.0 * x, "μ ∈ [1, 2σ)")?;
            }
            let extra = vec![cond("p > ⌈σ⌉", x.ceil())];
            let upper = 1.0 + 2.0 / (nf - 2.0 * x);
            Ok(ExponentBounds::new(theorem, Some(base(1.0)), extra, Some(upper), true))
        }
        Family::LargeRegularity => {
            chk.require(params.n >= 3, "n ≥ 3")?;
            chk.require(2.0 * x >= nf, "n ≤ 2σ")?;
            let extra = vec![cond("p > ⌈σ⌉", x.ceil())];
            Ok(ExponentBounds::new(theorem, Some(base(1.0)), extra, None, false))
        }
        Family::HighRegularitySharp => {
            chk.require(params.n >= 2, "n ≥ 2")?;
            chk.require(2.0 * x > nf, "σ > n/2")?;
            let extra = vec![cond("p > σ", x), cond("p > 2", 2.0)];
            Ok(ExponentBounds::new(theorem, Some(base(1.0)), extra, None, false))
        }
        Family::HighRegularity => {
            chk.require(params.n >= 2, "n ≥ 2")?;
            chk.require(2.0 * x > nf, "σ > n/2")?;
            Ok(ExponentBounds::new(theorem, None, vec![cond("p > σ+1", x + 1.0)], None, false))
        }
        Family::LowDimension => {
            let ok = match params.n {
                1 => x == 1.0,
                2 => x > 1.0 && x < 2.0,
                _ => false,
            };
            chk.require(ok, "σ = 1 for n = 1 or σ ∈ (1, 2) for n = 2")?;
            Ok(ExponentBounds::new(theorem, None, vec![cond("p > σ+1", x + 1.0)], None, false))
        }
    }
}

/// The energy threshold of the regime: `p_{n,μ}` under effective damping,
/// `(n+1)/(n−1)` otherwise, and `2` (from `p > σ+1`, `σ = 1`) when `n = 1`.
pub fn energy_threshold(params: &DerivedParams) -> Result<f64> {
    let setting = Setting::of(params)
        .ok_or_else(|| Error::Hypothesis("the energy threshold requires m > 0".to_string()))?;
    let nf = params.n as f64;
    Ok(match (setting, params.n) {
        (_, 1) => 2.0,
        (Setting::Effective, _) => 1.0 + 2.0 / (nf - params.mu),
        _ => (nf + 1.0) / (nf - 1.0),
    })
}

/// Position of `p` relative to the energy threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub supercritical: bool,
    pub threshold: f64,
    pub label: String,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.supercritical {
            write!(f, "supercritical (p > {})", self.label)
        } else {
            write!(f, "subcritical (p ≤ {})", self.label)
        }
    }
}

/// `x` to 12 significant digits without trailing zeros, so that `μ` derived
/// from a rounded `m` still prints as `1`.
fn tidy(x: f64) -> String {
    let s = format!("{:.*}", (11 - x.abs().log10().floor().max(0.0) as usize).max(1), x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Compare `p` with [`energy_threshold`].
pub fn critical_verdict(params: &DerivedParams, p: f64) -> Result<Verdict> {
    let threshold = energy_threshold(params)?;
    let label = if params.n >= 2 && Setting::of(params) == Some(Setting::Effective) {
        format!("p_{{{},{}}}={}", params.n, tidy(params.mu), tidy(threshold))
    } else {
        tidy(threshold)
    };
    Ok(Verdict {
        supercritical: p > threshold,
        threshold,
        label,
    })
}
