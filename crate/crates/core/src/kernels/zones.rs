use serde::{Deserialize, Serialize};

/// Phase-space zone of `(t, s, |ξ|)` relative to the threshold `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    /// `|ξ| e^{−s} <= N`: low frequency throughout `[s, t]`.
    Z1,
    /// `N e^s <= |ξ| <= N e^t`: the frequency crosses the threshold.
    Z2,
    /// `|ξ| e^{−t} >= N`: high frequency throughout.
    Z3,
}

/// Classify `(t, s, |ξ|)`; points on a boundary get the lower tag.
pub fn classify_zone(t: f64, s: f64, xi: f64, n: f64) -> Zone {
    if xi * (-s).exp() <= n {
        Zone::Z1
    } else if xi * (-t).exp() <= n {
        Zone::Z2
    } else {
        Zone::Z3
    }
}
