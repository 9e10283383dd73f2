//! Critical exponents, theoretical decay rates, empirical rate fits and the
//! admissible-exponent landscape at `μ = 1`.

mod landscape;
mod rates;
mod registry;

pub use landscape::{exponent_landscape, Contribution, Landscape, RationalInterval};
pub use rates::{
    fit_decay_rate, theoretical_rate, Channel, DataClass, DecayReport, RateSpec, MIN_FIT_SAMPLES,
};
pub use registry::{
    critical_exponents, critical_verdict, energy_threshold, Condition, ExponentBounds, Family, Setting, TheoremId,
    Verdict,
};
