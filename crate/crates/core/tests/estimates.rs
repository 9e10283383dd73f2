use desitter::estimates::{
    critical_exponents, energy_threshold, exponent_landscape, fit_decay_rate, theoretical_rate, Channel, DataClass, Family, Setting,
    TheoremId,
};
use desitter::{derive_params, DerivedParams, Regime};
use proptest::prelude::*;

fn id(setting: Setting, family: Family) -> TheoremId {
    TheoremId::new(setting, family).unwrap()
}

fn effective(n: usize, mu: f64) -> DerivedParams {
    DerivedParams::from_regime(n, Regime::Dissipation, mu).unwrap()
}

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[test]
fn energy_range_in_three_dimensions() {
    let b = critical_exponents(&effective(3, 1.0), 1.0, id(Setting::Effective, Family::Energy)).unwrap();
    assert!((b.lower - 2.0).abs() < 1e-15);
    assert_eq!(b.upper, Some(3.0));
    assert!(b.upper_inclusive && !b.empty);

    let mass = derive_params(3, 2.0).unwrap();
    let b = critical_exponents(&mass, 1.0, id(Setting::Mass, Family::Energy)).unwrap();
    assert_eq!((b.lower, b.upper), (2.0, Some(3.0)));
}

#[test]
fn intermediate_range_can_be_empty() {
    let t = id(Setting::Effective, Family::Intermediate);
    for (n, sigma) in [(7usize, 2.0), (7, 1.5), (9, 3.0), (6, 1.5)] {
        let b = critical_exponents(&effective(n, 1.0), sigma, t).unwrap();
        let product = (n as f64 - 2.0 * sigma) * (sigma.ceil() - 1.0);
        assert_eq!(b.empty, product >= 2.0, "n={n} σ={sigma}: {b}");
        assert!(b.empty);
    }
    let b = critical_exponents(&effective(5, 1.0), 2.0, t).unwrap();
    assert!(!b.empty);
    assert_eq!((b.lower, b.upper), (2.0, Some(3.0)));
}

#[test]
fn hypotheses_are_enforced_for_every_result() {
    let balanced = derive_params(3, 1.5).unwrap();
    for t in TheoremId::ALL {
        let wrong = match t.setting() {
            Setting::Balanced => effective(3, 1.5),
            _ => balanced,
        };
        let err = critical_exponents(&wrong, 2.0, t).unwrap_err();
        assert!(err.to_string().contains("requires"), "{t}: {err}");
    }
    let frac = id(Setting::Effective, Family::Fractional);
    assert!(critical_exponents(&effective(3, 1.5), 0.7, frac).unwrap_err().to_string().contains("μ ∈ [1, 2γ)"));
    assert!(critical_exponents(&effective(3, 1.0), 1.2, frac).unwrap_err().to_string().contains("γ ∈ (1/2, 1)"));
    let low = id(Setting::Mass, Family::LowDimension);
    assert!(critical_exponents(&derive_params(3, 2.0).unwrap(), 1.5, low).is_err());
    assert_eq!(critical_exponents(&derive_params(2, 2.0).unwrap(), 1.5, low).unwrap().lower, 2.5);
}

#[test]
fn theoretical_rate_examples() {
    let r = theoretical_rate(&effective(3, 1.5), 1.0, Channel::Solution, DataClass::GInHgammaMinus1).unwrap();
    assert_eq!((r.rate, r.log_correction), (-0.75, false));
    let r = theoretical_rate(&derive_params(3, 2.0).unwrap(), 1.0, Channel::Solution, DataClass::GInHgammaMinus1).unwrap();
    assert_eq!(r.rate, -1.0);
    let r = theoretical_rate(&derive_params(2, 1.0).unwrap(), 1.0, Channel::Derivative, DataClass::GInHgammaMinus1).unwrap();
    assert_eq!((r.rate, r.log_correction), (-0.5, true));
    let r = theoretical_rate(&effective(3, 0.5), 1.0, Channel::Solution, DataClass::GInHgamma).unwrap();
    assert_eq!(r.rate, -1.0);
    assert_eq!(r.g_term_rate, Some(-1.25));
    assert!(theoretical_rate(&derive_params(3, 0.0).unwrap(), 1.0, Channel::Solution, DataClass::GInHgamma).is_err());
}

#[test]
fn rate_is_continuous_at_unit_damping() {
    for n in 2..6 {
        let at = theoretical_rate(&effective(n, 1.0), 1.0, Channel::Solution, DataClass::GInHgamma).unwrap();
        let below = theoretical_rate(&effective(n, 1.0 - 1e-9), 1.0, Channel::Solution, DataClass::GInHgamma).unwrap();
        assert!((at.rate - below.rate).abs() < 1e-8);
        assert_eq!(at.rate, -0.5 * (n as f64 - 1.0));
    }
}

#[test]
fn landscape_small_dimensions() {
    assert_eq!(texts(&exponent_landscape(2).unwrap().coverage), ["(2, ∞)"]);
    let l3 = exponent_landscape(3).unwrap();
    assert_eq!(texts(&l3.coverage), ["(3/2, ∞)"]);
    assert!(l3.gaps.is_empty());
    assert_eq!(texts(&exponent_landscape(4).unwrap().coverage), ["(4/3, ∞)"]);
    let l5 = exponent_landscape(5).unwrap();
    assert_eq!(texts(&l5.coverage), ["(5/4, 5/3]", "(2, ∞)"]);
    assert_eq!(texts(&l5.gaps), ["(5/3, 2]"]);
}

#[test]
fn landscape_even_dimensions() {
    for half in 3..10 {
        let l = exponent_landscape(2 * half).unwrap();
        let want = [
            format!("({}/{}, {}/{}]", 2 * half, 2 * half - 1, half, half - 1),
            format!("({half}, ∞)"),
        ];
        assert_eq!(texts(&l.coverage), want, "n = {}", 2 * half);
    }
}

// The sharp high-regularity range p > max{p₁, σ, 2} with σ ↓ n/2 reaches down
// to n/2, below the ⌈σ⌉-limited intermediate range.
#[test]
fn landscape_odd_dimensions() {
    for half in 3..10 {
        let n = 2 * half + 1;
        let l = exponent_landscape(n).unwrap();
        let want = [format!("({n}/{}, {n}/{}]", n - 1, n - 2), format!("({n}/2, ∞)")];
        assert_eq!(texts(&l.coverage), want, "n = {n}");
        let low = l.contributions.iter().filter(|c| c.interval.upper.is_none()).min_by_key(|c| c.interval.lower);
        assert_eq!(low.unwrap().theorem, id(Setting::Effective, Family::HighRegularitySharp));
    }
}

fn admitted_by_some_regularity(n: usize, p: f64) -> bool {
    let params = effective(n, 1.0);
    let nf = n as f64;
    let mut sigmas: Vec<f64> = (1..4000).map(|i| 1.0 + i as f64 * 1e-3 * nf).collect();
    sigmas.extend((1..60).map(|j| 0.5 * nf - 2f64.powi(-j)));
    let gammas: Vec<f64> = (1..1000).map(|i| 0.5 + i as f64 * 5e-4).collect();
    TheoremId::of_setting(Setting::Effective).any(|t| {
        let xs: &[f64] = match t.family() {
            Family::Energy => &[1.0],
            Family::Fractional => &gammas,
            _ => &sigmas,
        };
        xs.iter().any(|&x| critical_exponents(&params, x, t).is_ok_and(|b| b.admits(p)))
    })
}

#[test]
fn landscape_agrees_with_the_registry() {
    for n in 2..10 {
        let l = exponent_landscape(n).unwrap();
        let ends: Vec<f64> = l
            .coverage
            .iter()
            .flat_map(|i| [Some(i.lower), i.upper])
            .flatten()
            .map(|q| *q.numer() as f64 / *q.denom() as f64)
            .collect();
        for i in 0..400 {
            let p = 1.0 + 0.0251 * i as f64;
            if ends.iter().any(|e| (e - p).abs() < 2e-3) {
                continue;
            }
            assert_eq!(l.covers(p), admitted_by_some_regularity(n, p), "n = {n}, p = {p}");
        }
    }
}

#[test]
fn fitted_rates_of_synthetic_histories() {
    let t: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let v: Vec<f64> = t.iter().map(|t| 3.0 * (-0.75 * t).exp()).collect();
    let r = fit_decay_rate(&t, &v, None, false).unwrap().with_theory(-0.75);
    assert!(r.deviation().unwrap() < 1e-12 && r.residual < 1e-12);
    let v: Vec<f64> = t.iter().map(|t| (1.0 + t) * (-0.5 * t).exp()).collect();
    let r = fit_decay_rate(&t, &v, None, true).unwrap();
    assert!((r.fitted_rate + 0.5).abs() < 1e-6);
}

proptest! {
    #[test]
    fn energy_threshold_monotone(n in 2usize..10, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let nf = n as f64;
        let (lo, hi) = (1.0 + (nf - 1.0) * a.min(b), 1.0 + (nf - 1.0) * a.max(b) * 0.999);
        prop_assume!(hi > lo && hi < nf);
        let at = |mu: f64, n: usize| energy_threshold(&effective(n, mu)).unwrap();
        prop_assert!(at(lo, n) <= at(hi, n));
        let p = |n: usize, mu: f64| 1.0 + 2.0 / (n as f64 - mu);
        prop_assert!(p(n, lo) <= p(n, hi));
        prop_assert!(p(n + 1, lo) < p(n, lo));
    }

    #[test]
    fn fractional_threshold_reduces_to_energy(n in 2usize..10, mu in 1.0f64..1.999) {
        let params = effective(n, mu);
        let energy = critical_exponents(&params, 1.0, id(Setting::Effective, Family::Energy)).unwrap().lower;
        let frac = |g: f64| critical_exponents(&params, g, id(Setting::Effective, Family::Fractional)).map(|b| b.lower);
        let near_one = frac(1.0 - 1e-12);
        prop_assume!(near_one.is_ok());
        prop_assert!((near_one.unwrap() - energy).abs() < 1e-9);
        let unit = effective(n, 1.0);
        for g in [0.6, 0.75, 0.9] {
            let eff = critical_exponents(&unit, g, id(Setting::Effective, Family::Fractional)).unwrap().lower;
            let ne = 1.0 + 2.0 * g / (n as f64 - 1.0);
            prop_assert!((eff - ne).abs() < 1e-14);
        }
    }

    #[test]
    fn bounds_are_well_formed(t in 0usize..24, n in 1usize..9, x in 0.5f64..8.0, m in 0.01f64..6.0) {
        let theorem = TheoremId::ALL[t];
        if let Ok(b) = critical_exponents(&derive_params(n, m).unwrap(), x, theorem) {
            prop_assert!(b.lower >= 1.0);
            prop_assert!(b.upper.is_none_or(|u| u > b.lower) || b.empty);
            prop_assert!(b.extra_conditions.iter().all(|c| c.threshold <= b.lower));
        }
    }
}
