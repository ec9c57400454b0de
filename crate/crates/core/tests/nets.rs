mod common;

use colombeau::nets::{
    fit_exponent, is_moderate, is_negligible, net_leq, scale_element, EpsilonGrid, NegligibilityPolicy, NetGrids, OrderGrid, OrderTest, Outcome, ScalarNet,
};
use colombeau::suite::{classify_battery, negligibility_battery, scale_battery};
use proptest::prelude::*;

fn grids() -> NetGrids {
    NetGrids::default()
}

fn net(f: impl Fn(f64, f64) -> f64) -> ScalarNet {
    ScalarNet::from_fn(&grids(), |q, e, _| f(q as f64, e)).unwrap()
}

fn ulps(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    let ulp = f64::from_bits(m.to_bits() + 1) - m;
    (a - b).abs() / ulp
}

#[test]
fn default_lattice_shape() {
    let g = grids();
    assert_eq!(g.orders.q_values, (0..=6).collect::<Vec<_>>());
    assert_eq!(g.eps.eps_values.len(), 10);
    assert_eq!(g.eps.eps_values[0], 0.125);
    assert_eq!(*g.eps.eps_values.last().unwrap(), 2f64.powi(-12));
    assert_eq!(g.eps.window(), 5..10);
    assert_eq!(g.n_cells(), 70);
    assert_eq!(g.cell(3, 4), 3 * 10 + 4);
}

#[test]
fn grids_reject_bad_values() {
    assert!(EpsilonGrid::new(vec![0.5, 0.5], 2).is_err());
    assert!(EpsilonGrid::new(vec![1.5, 0.5], 2).is_err());
    assert!(EpsilonGrid::new(vec![0.5, 0.25], 3).is_err());
    assert!(OrderGrid::new(vec![]).is_err());
    assert!(OrderGrid::new(vec![2, 1]).is_err());
}

#[test]
fn arithmetic_examples() {
    let g = grids();
    let a = scale_element(1.3, &g);
    assert!(a.add(&a.neg()).unwrap().values.iter().all(|&v| v == 0.0));
    let signed = net(|q, e| if q as usize % 2 == 0 { e } else { -e });
    assert_eq!(signed.abs().values, net(|_, e| e).values);
}

#[test]
fn scale_element_examples() {
    let g = NetGrids::with_diameter(OrderGrid::up_to(2), EpsilonGrid::new(vec![0.125, 0.1], 2).unwrap(), 2.0).unwrap();
    assert!(scale_element(0.0, &g).values.iter().all(|&v| v == 1.0));
    assert!((scale_element(2.0, &g).get(0, 1) - 0.04).abs() <= 1e-16);
    assert_eq!(scale_element(-1.0, &g).get(0, 0), 4.0);
}

#[test]
fn fit_examples() {
    let wiggle = fit_exponent(&net(|_, e| e * e * (1.0 + 0.1 * (1.0 / e).sin()))).unwrap();
    for r in &wiggle.rows {
        assert!((r.slope - 2.0).abs() <= 0.1 && r.residual <= 0.1, "{r:?}");
    }
    let zero = fit_exponent(&net(|_, _| 0.0)).unwrap();
    assert!(zero.rows.iter().all(|r| r.identically_zero && r.slope == f64::INFINITY));
}

#[test]
fn fit_uses_the_smallest_eps_only() {
    // Values outside the window are garbage; the fit must not see them.
    let g = grids();
    let w = g.eps.window();
    let n = ScalarNet::from_fn(&g, |_, e, _| if e > g.eps.eps_values[w.start] { 1e30 } else { e.powi(3) }).unwrap();
    let fit = fit_exponent(&n).unwrap();
    assert!(fit.rows.iter().all(|r| (r.slope - 3.0).abs() < 1e-9));
}

#[test]
fn moderate_examples() {
    let p = NegligibilityPolicy::default();
    let v = is_moderate(&net(|_, e| e.powi(-3)), &p);
    assert_eq!((v.outcome, v.order), (Outcome::Yes, Some(3)));
    // exp(1/ε) overflows below ε ≈ 1/709, so this case runs on ε = 2^-3..2^-9.
    let short = NetGrids::with_diameter(OrderGrid::up_to(6), EpsilonGrid::geometric(0.125, 2f64.powi(-9), 7, 5).unwrap(), 2.0).unwrap();
    let blowup = ScalarNet::from_fn(&short, |_, e, _| (1.0 / e).exp()).unwrap();
    assert_eq!(is_moderate(&blowup, &p).outcome, Outcome::No);
}

#[test]
fn oscillating_inverse_power_is_inconclusive_on_dyadic_eps() {
    // On ε = 2^-8..2^-12 the factor 2 + cos(1/ε) samples [1, 3] erratically;
    // the log-log residual exceeds the policy threshold, so no claim is made.
    let p = NegligibilityPolicy::default();
    let f = |e: f64| (2.0 + (1.0 / e).cos()) / e;
    let v = is_moderate(&net(|_, e| f(e)), &p);
    assert_eq!(v.outcome, Outcome::Inconclusive);
    let eps: Vec<f64> = (8..=12).map(|k| 2f64.powi(-k)).collect();
    let ys: Vec<f64> = eps.iter().map(|&e| f(e)).collect();
    let slope = common::loglog_slope(&eps, &ys);
    let row = v.fit.rows[0];
    assert!((row.slope - slope).abs() < 1e-12);
    let n = eps.len() as f64;
    let mx = eps.iter().map(|e| e.ln()).sum::<f64>() / n;
    let my = ys.iter().map(|y| y.ln()).sum::<f64>() / n;
    let rms = (eps.iter().zip(&ys).map(|(e, y)| (y.ln() - my - slope * (e.ln() - mx)).powi(2)).sum::<f64>() / n).sqrt();
    assert!((row.residual - rms).abs() < 1e-12);
    assert!(rms > p.residual_max);
}

#[test]
fn negligible_examples() {
    let p = NegligibilityPolicy::default();
    assert_eq!(is_negligible(&net(|q, e| e.powf(q)), &p).outcome, Outcome::Yes);
    assert_eq!(is_negligible(&net(|_, e| 1.0 / e), &p).outcome, Outcome::No);
    assert_eq!(is_negligible(&net(|q, e| e.powf(q + 2.0) * (1.0 + q)), &p).outcome, Outcome::Yes);
}

#[test]
fn battery_is_classified_without_error() {
    let cases = negligibility_battery(&grids()).unwrap();
    assert_eq!(cases.len(), 20);
    assert_eq!(cases.iter().filter(|c| c.expected == Outcome::Yes).count(), 10);
    let got = classify_battery(&cases, &NegligibilityPolicy::default());
    for (c, o) in cases.iter().zip(got) {
        assert_eq!(o, c.expected, "{}", c.name);
    }
}

#[test]
fn net_leq_examples() {
    let g = grids();
    let t = OrderTest::default();
    assert!(net_leq(&scale_element(2.0, &g), &scale_element(1.0, &g), &t).unwrap());
    assert!(!net_leq(&scale_element(1.0, &g), &scale_element(2.0, &g), &t).unwrap());
    let lhs = scale_element(0.6, &g).powf(2.0).unwrap().scale(10.0).unwrap();
    assert!(net_leq(&lhs, &scale_element(1.0, &g), &t).unwrap());
}

#[test]
fn scale_inequality_squares() {
    for c in scale_battery(&grids(), &OrderTest::default()).unwrap() {
        assert!(c.pass(), "{c:?}");
    }
}

#[test]
fn scale_inequality_linear_clause() {
    let g = grids();
    let t = OrderTest::default();
    for k in [1.0, 10.0, 100.0] {
        for r in [1.0, 2.0, 3.0] {
            let ok = scale_element(r + 0.1, &g).scale(k).unwrap();
            assert!(net_leq(&ok, &scale_element(r, &g), &t).unwrap());
            let bad = scale_element(r - 0.1, &g).scale(k).unwrap();
            assert!(!net_leq(&bad, &scale_element(r, &g), &t).unwrap());
        }
    }
}

#[test]
fn scale_inequality_absorption() {
    let g = grids();
    let t = OrderTest::default();
    for k in [1.0, 10.0, 100.0] {
        for r in [0.5, 1.0, 2.0] {
            for n in 0..=3 {
                let s = n as f64 + r + 1.0;
                let lhs = scale_element(-(n as f64), &g).mul(&scale_element(s, &g)).unwrap().scale(k).unwrap();
                assert!(net_leq(&lhs, &scale_element(r, &g), &t).unwrap(), "k={k} r={r} N={n}");
            }
        }
    }
}

#[test]
fn min_order_skips_low_rows() {
    let g = grids();
    // Row q = 0 violates the order, the others satisfy it.
    let x = ScalarNet::from_fn(&g, |q, e, _| if q == 0 { 1.0 } else { e * e }).unwrap();
    let y = scale_element(1.0, &g);
    assert!(!net_leq(&x, &y, &OrderTest::default()).unwrap());
    assert!(net_leq(&x, &y, &OrderTest { min_order: 1, ..OrderTest::default() }).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scale_elements_multiply_exactly(r8 in -48i32..=48, s8 in -48i32..=48) {
        // Eighths keep r + s exact, so only the powers themselves round.
        let (r, s) = (r8 as f64 / 8.0, s8 as f64 / 8.0);
        let g = grids();
        let prod = scale_element(r, &g).mul(&scale_element(s, &g)).unwrap();
        let direct = scale_element(r + s, &g);
        for (a, b) in prod.values.iter().zip(&direct.values) {
            prop_assert!(ulps(*a, *b) <= 4.0, "{a} vs {b}");
        }
    }

    #[test]
    fn scale_element_fit_slope(r in -5i32..=5) {
        let fit = fit_exponent(&scale_element(r as f64, &grids())).unwrap();
        for row in &fit.rows {
            prop_assert!((row.slope - r as f64).abs() <= 1e-6);
            prop_assert!(row.residual >= 0.0);
        }
    }

    #[test]
    fn negligible_powers_are_moderate(a in 0.0f64..3.0, c in 0.01f64..100.0) {
        let p = NegligibilityPolicy::default();
        let x = net(|q, e| c * e.powf(q + a));
        prop_assert_eq!(is_negligible(&x, &p).outcome, Outcome::Yes);
        let m = is_moderate(&x, &p);
        prop_assert_eq!(m.outcome, Outcome::Yes);
        prop_assert!(m.order.unwrap() <= 0);
    }

    #[test]
    fn order_is_reflexive_and_transitive(
        e in proptest::array::uniform3(-4.0f64..4.0),
        c in proptest::array::uniform3(0.01f64..100.0),
    ) {
        let g = grids();
        let t = OrderTest::default();
        let n: Vec<ScalarNet> = (0..3).map(|i| scale_element(e[i], &g).scale(c[i]).unwrap()).collect();
        for x in &n {
            prop_assert!(net_leq(x, x, &t).unwrap());
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if net_leq(&n[i], &n[j], &t).unwrap() && net_leq(&n[j], &n[k], &t).unwrap() {
                        prop_assert!(net_leq(&n[i], &n[k], &t).unwrap(), "{i} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn eps_grid_invariants(count in 2usize..20, lo in 4i32..14) {
        let g = EpsilonGrid::geometric(0.125, 2f64.powi(-lo), count, count.min(5)).unwrap();
        prop_assert!(g.eps_values.iter().all(|&e| e > 0.0 && e <= 1.0));
        prop_assert!(g.eps_values.windows(2).all(|w| w[1] < w[0]));
    }
}
