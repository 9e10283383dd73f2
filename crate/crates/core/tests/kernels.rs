use desitter::kernels::audit::{audit_multiplier_bounds, audit_regime, sup_k1_profile, SampleGrid};
use desitter::kernels::oracle::khat_oracle;
use desitter::kernels::{classify_zone, kernel, KernelEval, Zone};
use desitter::Regime;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: [(Regime, f64); 8] = [
    (Regime::Dissipation, 0.5),
    (Regime::Dissipation, 1.0),
    (Regime::Dissipation, 1.5),
    (Regime::Dissipation, 2.0),
    (Regime::Dissipation, 2.5),
    (Regime::Mass, 0.7),
    (Regime::Mass, 1.3229),
    (Regime::Balanced, 0.0),
];

/// Entry errors scaled by the norm of the oracle column they belong to.
fn column_error(a: &KernelEval, b: &KernelEval) -> f64 {
    let c0 = b.k0.norm().hypot(b.dt_k0.norm());
    let c1 = b.k1.norm().hypot(b.dt_k1.norm());
    [
        (a.k0 - b.k0).norm() / c0,
        (a.dt_k0 - b.dt_k0).norm() / c0,
        (a.k1 - b.k1).norm() / c1,
        (a.dt_k1 - b.dt_k1).norm() / c1,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn entry_error(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn random_samples_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (regime, mu) in CASES {
        for _ in 0..200 {
            let t: f64 = rng.gen_range(0.0..6.0);
            let s: f64 = rng.gen_range(0.0..=t);
            let xi: f64 = rng.gen_range(0.0..40.0);
            let a = kernel(regime, mu, t, s, xi).unwrap();
            let b = khat_oracle(regime, mu, t, s, xi, 1e-11).unwrap();
            let e = column_error(&a, &b);
            assert!(e < 1e-8, "{regime} μ={mu} (t,s,ξ)=({t},{s},{xi}): error {e:e}");
        }
    }
}

#[test]
fn worked_points_match_the_oracle_entrywise() {
    for (regime, mu, t, s, xi) in [
        (Regime::Dissipation, 1.5, 2.0, 0.5, 3.0),
        (Regime::Mass, 1.3229, 2.0, 0.0, 5.0),
        (Regime::Balanced, 0.0, 3.0, 1.0, 10.0),
    ] {
        let a = kernel(regime, mu, t, s, xi).unwrap();
        let b = khat_oracle(regime, mu, t, s, xi, 1e-12).unwrap();
        for (x, y) in [(a.k0, b.k0), (a.k1, b.k1), (a.dt_k0, b.dt_k0), (a.dt_k1, b.dt_k1)] {
            assert!(entry_error(x, y) < 1e-6, "{regime}: {x} vs {y}");
        }
    }
}

#[test]
fn unit_damping_closed_form_at_zero_start() {
    for xi in [0.1, 1.0, 7.5, 33.0] {
        for t in [0.3, 2.0, 5.5] {
            let k = kernel(Regime::Dissipation, 1.0, t, 0.0, xi).unwrap();
            let want = (xi * (1.0 - (-t).exp())).sin() / xi;
            assert!((k.k1.re - want).abs() < 1e-13);
        }
    }
    let k = kernel(Regime::Dissipation, 1.0, 2.0, 0.0, 1e-9).unwrap();
    assert!((k.k1.re - (1.0 - (-2.0f64).exp())).abs() < 1e-9);
}

#[test]
fn general_construction_approaches_the_unit_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let t: f64 = rng.gen_range(0.0..6.0);
        let s: f64 = rng.gen_range(0.0..=t);
        let xi: f64 = rng.gen_range(0.0..40.0);
        let closed = kernel(Regime::Dissipation, 1.0, t, s, xi).unwrap();
        for mu in [1.0 - 1e-4, 1.0 + 1e-4] {
            let near = kernel(Regime::Dissipation, mu, t, s, xi).unwrap();
            for (x, y) in [(near.k0, closed.k0), (near.k1, closed.k1), (near.dt_k0, closed.dt_k0), (near.dt_k1, closed.dt_k1)] {
                assert!((x - y).norm() < 1e-3, "μ={mu} (t,s,ξ)=({t},{s},{xi}): {x} vs {y}");
            }
        }
    }
}

#[test]
fn dissipation_zero_frequency_mode() {
    for mu in [0.5, 1.5, 2.0] {
        let k = kernel(Regime::Dissipation, mu, 3.0, 1.0, 0.0).unwrap();
        let want = (1.0 - (-2.0 * mu).exp()) / mu;
        assert!((k.k1.re - want).abs() < 1e-14);
        let o = khat_oracle(Regime::Dissipation, mu, 3.0, 1.0, 0.0, 1e-12).unwrap();
        assert!((o.k1.re - want).abs() < 1e-10);
    }
    let k = kernel(Regime::Balanced, 0.0, 3.5, 1.0, 0.0).unwrap();
    assert_eq!(k.k1.re, 2.5);
}

#[test]
fn mass_multipliers_are_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for mu in [0.7, 1.3229] {
        for _ in 0..200 {
            let t: f64 = rng.gen_range(0.0..6.0);
            let s: f64 = rng.gen_range(0.0..=t);
            let xi: f64 = rng.gen_range(0.0..40.0);
            let k = kernel(Regime::Mass, mu, t, s, xi).unwrap();
            let scale = k.k0.norm().max(k.k1.norm()).max(1.0);
            assert!(k.max_imag() < 1e-9 * scale, "imag {} at ({t},{s},{xi})", k.max_imag());
        }
    }
}

fn mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

#[test]
fn zone_examples() {
    assert_eq!(classify_zone(2.0, 0.0, 1.0, 2.0), Zone::Z1);
    assert_eq!(classify_zone(1.0, 0.0, 100.0, 2.0), Zone::Z3);
    assert_eq!(classify_zone(3.0, 0.0, 4.0, 2.0), Zone::Z2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_data_at_equal_times(case in 0usize..8, s in 0.0f64..6.0, xi in 0.0f64..40.0) {
        let (regime, mu) = CASES[case];
        let k = kernel(regime, mu, s, s, xi).unwrap();
        let m = k.real_matrix();
        let tol = 1e-10;
        prop_assert!((m[0][0] - 1.0).abs() < tol && m[0][1].abs() < tol, "{m:?}");
        prop_assert!(m[1][0].abs() < tol * xi.max(1.0) && (m[1][1] - 1.0).abs() < tol, "{m:?}");
    }

    #[test]
    fn propagators_compose(case in 0usize..8, a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0.0f64..6.0, xi in 0.0f64..40.0) {
        let (regime, mu) = CASES[case];
        let sigma = a * t;
        let s = b * sigma;
        let direct = kernel(regime, mu, t, s, xi).unwrap().real_matrix();
        let second = kernel(regime, mu, t, sigma, xi).unwrap().real_matrix();
        let first = kernel(regime, mu, sigma, s, xi).unwrap().real_matrix();
        let composed = mul(second, first);
        let scale = direct.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((composed[i][j] - direct[i][j]).abs() < 1e-8 * scale,
                    "{regime} μ={mu}: {composed:?} vs {direct:?}");
            }
        }
    }

    #[test]
    fn zones_follow_their_definitions(s in 0.0f64..5.0, d in 0.0f64..5.0, xi in 0.0f64..500.0, n in 0.1f64..4.0) {
        let t = s + d;
        let z = classify_zone(t, s, xi, n);
        let expected = if xi * (-s).exp() <= n {
            Zone::Z1
        } else if xi * (-t).exp() <= n {
            Zone::Z2
        } else {
            Zone::Z3
        };
        prop_assert_eq!(z, expected);
    }
}

fn audit_grid() -> SampleGrid {
    SampleGrid {
        t_max: 8.0,
        nt: 9,
        ns: 3,
        xi_min: 1e-2,
        xi_max: 100.0,
        nxi: 21,
        include_zero: true,
    }
}

// Suprema near t = 0 and at large |ξ| need the default density to settle.
#[test]
fn audited_constants_are_finite_and_stable() {
    let grid = SampleGrid::default();
    for (regime, mu) in [(Regime::Dissipation, 1.5), (Regime::Mass, 0.7), (Regime::Balanced, 0.0)] {
        let coarse = audit_regime(regime, mu, &grid).unwrap();
        let fine = audit_regime(regime, mu, &grid.refined()).unwrap();
        for (c, f) in coarse.iter().zip(&fine) {
            if c.diagnostic {
                continue;
            }
            assert!(c.fitted_constant.is_finite(), "{regime} μ={mu} {}: {}", c.estimate_id, c.fitted_constant);
            let change = (f.fitted_constant - c.fitted_constant).abs() / c.fitted_constant;
            assert!(change < 0.05, "{regime} μ={mu} {}: {} -> {}", c.estimate_id, c.fitted_constant, f.fitted_constant);
        }
    }
}

#[test]
fn non_effective_growth_bound() {
    let r = audit_multiplier_bounds(Regime::Dissipation, 0.5, "k0", &audit_grid()).unwrap();
    assert!(r.fitted_constant.is_finite() && r.fitted_constant >= 1.0);
}

#[test]
fn balanced_k1_grows_linearly_without_the_correction() {
    let grid = SampleGrid { t_max: 10.0, nt: 11, ..audit_grid() };
    let profile = sup_k1_profile(Regime::Balanced, 0.0, &grid).unwrap();
    let tail: Vec<_> = profile.iter().filter(|(t, _)| *t >= 2.0).collect();
    let n = tail.len() as f64;
    let mt = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = tail.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum::<f64>() / tail.iter().map(|p| (p.0 - mt).powi(2)).sum::<f64>();
    assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
    let corrected = audit_multiplier_bounds(Regime::Balanced, 0.0, "k1", &grid).unwrap();
    assert!(corrected.fitted_constant <= 1.0 + 1e-12);
}
