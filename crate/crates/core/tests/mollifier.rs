mod common;

use colombeau::grid::DomainSpec;
use colombeau::mollifier::{build_mollifier, moment, mollify, scaled_eval, InitialDatum, MollifierProfile, MollifierSpec};
use common::{integrate, sup_abs};
use proptest::prelude::*;
use std::f64::consts::PI;

fn profile(q: usize) -> MollifierProfile {
    build_mollifier(MollifierSpec::with_order(q)).unwrap()
}

fn oracle_moment(p: &MollifierProfile, j: usize) -> f64 {
    let r = p.radius();
    integrate(|x| x.powi(j as i32) * p.eval(x), -r, r, 400, 12)
}

#[test]
fn moments_agree_with_gauss_legendre() {
    for q in 0..=6 {
        let p = profile(q);
        for j in 0..=q {
            let want = if j == 0 { 1.0 } else { 0.0 };
            assert!((oracle_moment(&p, j) - want).abs() <= 1e-8, "q={q} j={j}");
            assert!((moment(&p, j).unwrap() - want).abs() <= 1e-8, "q={q} j={j}");
        }
    }
}

#[test]
fn first_nonvanishing_moment_matches_oracle() {
    let p = profile(2);
    let (m, o) = (moment(&p, 4).unwrap(), oracle_moment(&p, 4));
    assert!(m.abs() > 1e-4);
    assert!((m - o).abs() <= 1e-9 * o.abs().max(1.0));
}

#[test]
fn vanishes_outside_support() {
    for q in [0, 2, 4] {
        let p = profile(q);
        for x in [-3.0, -1.0, 1.0, 1.0 + 1e-12, 2.5] {
            assert_eq!(p.eval(x), 0.0);
        }
    }
}

#[test]
fn order_four_profile_is_signed() {
    let p = profile(4);
    let samples: Vec<f64> = (0..=2000).map(|k| p.eval(-1.0 + k as f64 / 1000.0)).collect();
    assert!(samples.iter().any(|&v| v > 0.0));
    assert!(samples.iter().any(|&v| v < 0.0));
}

#[test]
fn scaled_eval_examples() {
    let p = profile(0);
    assert_eq!(scaled_eval(&p, 1.0, 0.0), p.eval(0.0));
    assert_eq!(scaled_eval(&p, 0.1, 0.3), 0.0);
    assert!((scaled_eval(&p, 0.5, 0.0) - 2.0 * p.eval(0.0)).abs() <= 1e-15);
}

#[test]
fn mollified_delta_peak() {
    let dom = DomainSpec::unit(201).unwrap();
    let p = profile(0);
    for eps in [0.1, 0.05, 2f64.powi(-6)] {
        let f = mollify(&InitialDatum::Delta { x0: 0.5 }, &p, eps, &dom).unwrap();
        assert!((sup_abs(&f) - p.eval(0.0) / eps).abs() <= 1e-12 / eps);
        for (x, v) in dom.nodes().iter().zip(&f) {
            assert_eq!(*v, scaled_eval(&p, eps, x - 0.5));
        }
    }
}

#[test]
fn delta_prime_is_odd_about_its_location() {
    let dom = DomainSpec::unit(201).unwrap();
    let p = profile(0);
    let eps = 0.1;
    let f = mollify(&InitialDatum::DeltaPrime { x0: 0.5 }, &p, eps, &dom).unwrap();
    let n = f.len();
    let scale = sup_abs(&f);
    for i in 0..n {
        assert!((f[i] + f[n - 1 - i]).abs() <= 1e-10 * scale);
    }
    // The derivative of the mollified δ, checked by a centred difference.
    let g = |x: f64| scaled_eval(&p, eps, x - 0.5);
    for (&x, &v) in dom.nodes().iter().zip(&f).step_by(7) {
        let d = 1e-6;
        let fd = (g(x + d) - g(x - d)) / (2.0 * d);
        assert!((v - fd).abs() <= 1e-5 * scale, "x={x}");
    }
}

#[test]
fn smooth_datum_converges_at_order_three_or_better() {
    let dom = DomainSpec::new(0.2, 0.8, 61).unwrap();
    let p = profile(2);
    let g = |x: f64| (PI * x).sin();
    let eps = [0.1, 0.05, 0.025];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let f = mollify(&InitialDatum::smooth(g), &p, e, &dom).unwrap();
            dom.nodes().iter().zip(&f).fold(0.0f64, |m, (&x, &v)| m.max((v - g(x)).abs()))
        })
        .collect();
    let rate = common::loglog_slope(&eps, &errs);
    assert!(rate >= 3.0 - 0.1, "rate {rate}, errors {errs:?}");
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(MollifierSpec::new(2, 0.0, 1e-10).is_err());
    assert!(MollifierSpec::new(2, 1.0, 0.0).is_err());
    assert!(MollifierSpec::new(2, f64::INFINITY, 1e-10).is_err());
}

#[test]
fn point_data_escaping_the_domain_is_rejected() {
    let dom = DomainSpec::unit(101).unwrap();
    let p = profile(0);
    assert!(mollify(&InitialDatum::Delta { x0: 0.95 }, &p, 0.1, &dom).is_err());
    assert!(mollify(&InitialDatum::Delta { x0: 0.5 }, &p, 0.0, &dom).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaled_profile_has_unit_mass(q in 0usize..=6, eps in 1e-4f64..1.0) {
        let p = profile(q);
        let mass = integrate(|x| scaled_eval(&p, eps, x), -eps, eps, 200, 10);
        prop_assert!((mass - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn scaled_profile_support(q in 0usize..=6, eps in 1e-4f64..1.0, z in 1.0f64..50.0) {
        let p = profile(q);
        prop_assert_eq!(scaled_eval(&p, eps, z * eps), 0.0);
        prop_assert_eq!(scaled_eval(&p, eps, -z * eps), 0.0);
    }

    #[test]
    fn delta_peak_scales_like_inverse_eps(k in 3i32..=12) {
        let dom = DomainSpec::unit(201).unwrap();
        let p = profile(0);
        let eps = 2f64.powi(-k);
        let f = mollify(&InitialDatum::Delta { x0: 0.5 }, &p, eps, &dom).unwrap();
        prop_assert!((sup_abs(&f) * eps - p.max_abs()).abs() <= 1e-12);
    }
}
