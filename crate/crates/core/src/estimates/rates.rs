//! Theoretical decay rates of the linear problem and least-squares fits of
//! measured norm histories.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::transforms::{DerivedParams, Regime};

/// Fewest samples accepted inside a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Which norm a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// `‖φ(t)‖_{H^γ}`.
    Solution,
    /// `‖φ_t(t)‖_{H^{γ−1}}`.
    Derivative,
}

/// Regularity of the second datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataClass {
    /// `g ∈ H^{γ−1}`.
    GInHgammaMinus1,
    /// `g ∈ H^γ`.
    GInHgamma,
}

/// Exponential rate of a decay estimate, `e^{rate·t}` or `(1+t)e^{rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSpec {
    pub rate: f64,
    pub log_correction: bool,
    /// Faster rate of the term carrying `g`, when the data class improves it.
    pub g_term_rate: Option<f64>,
}

/// Decay rate of the linear problem for data in `H^γ × H^{γ−1}`.
pub fn theoretical_rate(params: &DerivedParams, gamma: f64, channel: Channel, data_class: DataClass) -> Result<RateSpec> {
    let hyp = |h: &str| Error::Hypothesis(format!("decay rates require {h}"));
    if !(gamma > 0.5) {
        return Err(hyp(&format!("γ > 1/2, got γ = {gamma}")));
    }
    let nf = params.n as f64;
    let slow = -0.5 * (nf - 1.0);
    let spec = |rate, log_correction, g_term_rate| RateSpec {
        rate,
        log_correction,
        g_term_rate,
    };
    Ok(match params.regime {
        Regime::Dissipation => {
            let mu = params.mu;
            if params.massless || !(mu > 0.0 && mu < nf) {
                return Err(hyp("m > 0, i.e. μ ∈ (0, n)"));
            }
            if mu >= 1.0 {
                spec(0.5 * (mu - nf), false, None)
            } else {
                let g = (channel == Channel::Solution && data_class == DataClass::GInHgamma)
                    .then_some(slow - 0.5 * (1.0 - mu));
                spec(slow, false, g)
            }
        }
        Regime::Mass => spec(slow, false, None),
        Regime::Balanced => spec(slow, true, None),
    })
}

/// Fitted exponential rate of a norm history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Slope of `log‖·‖` (or `log(‖·‖/(1+t))`) against `t`.
    pub fitted_rate: f64,
    pub intercept: f64,
    pub theoretical_rate: Option<f64>,
    pub log_correction: bool,
    pub fit_window: (f64, f64),
    /// Number of samples inside the window.
    pub samples: usize,
    /// RMS residual of the linear fit on the log scale.
    pub residual: f64,
}

impl DecayReport {
    pub fn with_theory(mut self, rate: f64) -> Self {
        self.theoretical_rate = Some(rate);
        self
    }

    /// `|fitted − theoretical|`, when a theoretical rate is attached.
    pub fn deviation(&self) -> Option<f64> {
        self.theoretical_rate.map(|r| (self.fitted_rate - r).abs())
    }

    pub fn passes(&self, tolerance: f64) -> Option<bool> {
        self.deviation().map(|d| d <= tolerance)
    }

    fn log_value(&self, t: f64, norm: f64) -> f64 {
        let v = norm.ln();
        if self.log_correction {
            v - t.ln_1p()
        } else {
            v
        }
    }

    /// Write `t, log_norm, fit` rows for plotting.
    pub fn write_fit_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "log_norm", "fit"])?;
        for (&t, &v) in self.times.iter().zip(&self.norms) {
            let fit = self.intercept + self.fitted_rate * t;
            out.write_record([format!("{t:e}"), format!("{:e}", self.log_value(t, v)), format!("{fit:e}")])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Least-squares rate of `norms` over `window` (default `[0.4·t_end, t_end]`).
pub fn fit_decay_rate(times: &[f64], norms: &[f64], window: Option<(f64, f64)>, log_correction: bool) -> Result<DecayReport> {
    if times.len() != norms.len() {
        return Err(domain(format!("{} times but {} norms", times.len(), norms.len())));
    }
    let (t_min, t_max) = times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    if times.is_empty() || !t_min.is_finite() || !t_max.is_finite() {
        return Err(domain("insufficient samples: the time series is empty or not finite"));
    }
    let (lo, hi) = window.unwrap_or((0.4 * t_max, t_max));
    let slack = 1e-9 * t_max.abs().max(1.0);
    if !(lo < hi) || lo < t_min - slack || hi > t_max + slack {
        return Err(domain(format!(
            "fit window [{lo}, {hi}] is not inside the sampled range [{t_min}, {t_max}]"
        )));
    }
    let mut report = DecayReport {
        times: times.to_vec(),
        norms: norms.to_vec(),
        fitted_rate: f64::NAN,
        intercept: f64::NAN,
        theoretical_rate: None,
        log_correction,
        fit_window: (lo, hi),
        samples: 0,
        residual: f64::NAN,
    };
    let mut pts = Vec::new();
    for (&t, &v) in times.iter().zip(norms) {
        if t < lo - slack || t > hi + slack {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(format!("nonpositive norm {v} at t = {t} inside the fit window")));
        }
        pts.push((t, report.log_value(t, v)));
    }
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(domain(format!(
            "insufficient samples: {} in window [{lo}, {hi}], need at least {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(domain("insufficient samples: all times in the window coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mt;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    report.fitted_rate = slope;
    report.intercept = intercept;
    report.samples = pts.len();
    report.residual = (ss / k).sqrt();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, t_end: f64) -> Vec<f64> {
        (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
    }

    #[test]
    fn exact_exponential() {
        let t = grid(100, 10.0);
        let v: Vec<f64> = t.iter().map(|t| (-0.75 * t).exp()).collect();
        let r = fit_decay_rate(&t, &v, None, false).unwrap();
        assert!((r.fitted_rate + 0.75).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        assert_eq!(r.fit_window, (4.0, 10.0));
    }

    #[test]
    fn log_corrected_history() {
        let t = grid(100, 10.0);
        let v: Vec<f64> = t.iter().map(|t| (1.0 + t) * (-0.5 * t).exp()).collect();
        let r = fit_decay_rate(&t, &v, None, true).unwrap();
        assert!((r.fitted_rate + 0.5).abs() < 1e-6);
        let raw = fit_decay_rate(&t, &v, None, false).unwrap();
        assert!((raw.fitted_rate + 0.5).abs() > 0.05);
    }

    #[test]
    fn rejects_short_or_nonpositive_series() {
        let t = grid(5, 10.0);
        let v = vec![1.0; 6];
        assert!(fit_decay_rate(&t, &v, None, false).unwrap_err().to_string().contains("insufficient"));
        let t = grid(100, 10.0);
        let mut v = vec![1.0; 101];
        v[80] = 0.0;
        assert!(fit_decay_rate(&t, &v, None, false).unwrap_err().to_string().contains("nonpositive"));
        assert!(fit_decay_rate(&t, &vec![1.0; 101], Some((5.0, 12.0)), false).is_err());
    }

    #[test]
    fn fit_csv_has_one_row_per_sample() {
        let t = grid(20, 2.0);
        let v: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
        let r = fit_decay_rate(&t, &v, None, false).unwrap();
        let mut buf = Vec::new();
        r.write_fit_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 22);
    }
}
