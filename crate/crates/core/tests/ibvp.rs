mod common;

use std::f64::consts::PI;

use colombeau::grid::{DomainSpec, SpaceTimeGrid};
use colombeau::ibvp::{
    cutoff_sequence_run, limit_assembly, solve_generalized, spearman, uniqueness_probe, verify_apriori, CutoffRunConfig, GeneralizedInitialDatum, IbvpConfig,
    UniquenessConfig,
};
use colombeau::mollifier::InitialDatum;
use colombeau::nets::{fit_exponent, is_moderate, EpsilonGrid, NetGrids, OrderGrid, OrderTest, Outcome};
use colombeau::solver::SolverConfig;
use colombeau::suite::exponent_threshold_holds;
use colombeau::topology::MultiIndex;
use common::sup_abs;
use proptest::prelude::*;

fn small(nx: usize, t: f64, nt: usize, substeps: usize, orders: Vec<usize>) -> IbvpConfig {
    IbvpConfig {
        grid: SpaceTimeGrid::new(DomainSpec::unit(nx).unwrap(), t, nt).unwrap(),
        orders: OrderGrid::new(orders).unwrap(),
        solver: SolverConfig { substeps, ..SolverConfig::default() },
        ..IbvpConfig::default()
    }
}

fn delta() -> GeneralizedInitialDatum {
    InitialDatum::Delta { x0: 0.5 }.into()
}

fn sigma0() -> MultiIndex {
    MultiIndex::new(vec![0, 0])
}

#[test]
fn smooth_datum_is_moderate_of_order_zero() {
    let r = solve_generalized(&InitialDatum::smooth(|x| (PI * x).sin()).into(), &small(101, 0.02, 41, 10, vec![0, 2])).unwrap();
    assert!(!r.is_partial());
    let v = r.verdict(&sigma0()).unwrap();
    assert_eq!((v.outcome, v.order), (Outcome::Yes, Some(0)), "{}", v.reason);
    // Max principle: the solution never exceeds the data, which are bounded by 1.
    assert!(r.seminorm(&sigma0()).unwrap().values.iter().all(|&s| s <= 1.0 + 1e-9));
}

#[test]
fn delta_datum_certification() {
    let r = solve_generalized(&delta(), &small(101, 0.02, 41, 10, vec![0, 2, 4])).unwrap();
    let v = r.verdict(&sigma0()).unwrap();
    assert_eq!((v.outcome, v.order), (Outcome::Yes, Some(1)), "{}", v.reason);
    for row in &v.fit.rows {
        assert!(row.slope >= -1.2 && row.residual <= 0.15, "{row:?}");
    }
    for s in [MultiIndex::new(vec![1, 0]), MultiIndex::new(vec![0, 1])] {
        let v = r.verdict(&s).unwrap();
        assert_eq!(v.outcome, Outcome::Yes, "{s}: {}", v.reason);
        assert!(v.order.is_some());
    }
    assert!(r.boundary_trace_residual.values.iter().all(|&v| v == 0.0));
    let rep = verify_apriori(&r);
    assert!(rep.violations.is_empty(), "{:?}", rep.violations.first());
    assert_eq!(rep.cells_checked, r.grids.n_cells());
}

#[test]
fn every_verdict_has_its_net() {
    let cfg = small(51, 0.01, 16, 4, vec![0, 1]);
    let r = solve_generalized(&delta(), &cfg).unwrap();
    for (s, _) in &r.moderate_verdicts {
        assert!(r.seminorm(s).is_some(), "{s}");
    }
    assert_eq!(r.moderate_verdicts.len(), cfg.sigmas.len());
}

#[test]
fn zero_data_meet_the_bound_with_equality() {
    let r = solve_generalized(&InitialDatum::smooth(|_| 0.0).into(), &small(51, 0.01, 16, 4, vec![0, 1])).unwrap();
    let rep = verify_apriori(&r);
    assert!(rep.violations.is_empty());
    for (c, cell) in r.cells.iter().enumerate() {
        assert_eq!(cell.datum_sup, 0.0);
        assert_eq!(sup_abs(&r.solution.cells[c]), 0.0);
    }
}

#[test]
fn delta_solutions_are_smoothed_by_t_one_twentieth() {
    // Row 10 of 21 on [0, 0.1] is t = 0.05.
    let cfg = small(101, 0.1, 21, 100, vec![0, 2, 4]);
    let r = solve_generalized(&delta(), &cfg).unwrap();
    let bound = 1.05 * 10f64.sqrt();
    assert!(bound <= 3.33);
    for cell in &r.solution.cells {
        assert!(sup_abs(&cell[10 * 101..11 * 101]) <= bound);
    }
    assert!(verify_apriori(&r).violations.is_empty());
}

#[test]
fn moderateness_is_inherited_from_the_datum() {
    let r = solve_generalized(&delta(), &small(101, 0.02, 41, 10, vec![0, 2])).unwrap();
    let datum = is_moderate(&r.initial.sup_norm(), &r.config.policy);
    let sol = r.verdict(&sigma0()).unwrap();
    assert_eq!(datum.outcome, Outcome::Yes);
    assert!(sol.order.unwrap() <= datum.order.unwrap());
    let (df, sf) = (fit_exponent(&r.initial.sup_norm()).unwrap(), &sol.fit);
    for (d, s) in df.rows.iter().zip(&sf.rows) {
        assert!(s.slope >= d.slope - 1e-9, "q={}: {} < {}", d.q, s.slope, d.slope);
    }
}

fn cutoff_cfg(nx: usize, p_max: usize, substeps: usize) -> CutoffRunConfig {
    let mut ibvp = small(nx, 0.02, 21, substeps, vec![0, 2]);
    ibvp.eps = EpsilonGrid::geometric(0.125, 2f64.powi(-7), 5, 3).unwrap();
    CutoffRunConfig { ibvp, p_max, ..CutoffRunConfig::default() }
}

#[test]
fn compact_datum_cutoffs_act_as_identity() {
    let cfg = cutoff_cfg(1153, 6, 4);
    let rep = cutoff_sequence_run(&delta(), &cfg).unwrap();
    let p0 = rep.p0.expect("a compact datum is eventually untouched by the cutoffs");
    for pair in rep.pairs.iter().filter(|r| r.p >= p0) {
        assert!(pair.identically_zero, "({}, {})", pair.p, pair.q);
        assert!(pair.memberships.iter().all(|&m| m));
    }
    for pair in &rep.pairs {
        assert!(pair.apq_min >= -1e-12);
        assert!(pair.apq_identity_ulps <= 4.0);
    }
    assert_eq!(rep.max_principle_violations, 0);
    let lim = limit_assembly(&rep, &delta()).unwrap();
    assert!(lim.boundary_zero);
    assert!(rep.limit_minus_last.values.iter().all(|&v| v == 0.0));
}

#[test]
fn boundary_decaying_differences_shrink() {
    let u0: GeneralizedInitialDatum = InitialDatum::BoundaryDecaying { power: -0.5 }.into();
    let coarse = cutoff_sequence_run(&u0, &cutoff_cfg(1441, 7, 4)).unwrap();
    let fine = cutoff_sequence_run(&u0, &cutoff_cfg(1441, 7, 8)).unwrap();
    for rep in [&coarse, &fine] {
        assert!(rep.consecutive_decreasing.iter().all(|&b| b));
        assert!(rep.spearman_min() >= 0.9, "{}", rep.spearman_min());
        for pair in &rep.pairs {
            assert!(pair.apq_min >= -1e-12);
            assert!(pair.apq_identity_ulps <= 4.0, "({}, {}): {}", pair.p, pair.q, pair.apq_identity_ulps);
            assert!(pair.chain_residual.is_finite());
        }
        assert_eq!(rep.max_principle_violations, 0);
    }
    let sups = |rep: &colombeau::ibvp::CutoffReport, p: usize| rep.pairs.iter().find(|r| r.p == p && r.q == p + 1).unwrap().sup_net().values.clone();
    for c in 0..coarse.grids.n_cells() {
        let tail: Vec<f64> = (4..=6).map(|p| sups(&coarse, p)[c]).collect();
        assert!(tail[0] > tail[1] && tail[1] > tail[2], "cell {c}: {tail:?}");
    }
    // Halving dt moves the (5, 6) sups by far less than their spacing.
    for (a, b) in sups(&coarse, 5).iter().zip(sups(&fine, 5)) {
        assert!((a - b).abs() <= 0.02 * a, "{a} vs {b}");
    }
    let lim = limit_assembly(&coarse, &u0).unwrap();
    assert!(lim.boundary_zero);
    let datum_fit = lim.datum_fit.as_ref().unwrap();
    for (l, d) in lim.interior_fit.rows.iter().zip(&datum_fit.rows) {
        assert!(l.slope >= d.slope - 0.05, "q={}: {} vs {}", l.q, l.slope, d.slope);
    }
}

#[test]
fn cutoff_run_rejects_short_sequences() {
    assert!(cutoff_sequence_run(&delta(), &cutoff_cfg(1153, 3, 4)).is_err());
}

fn unique_cfg(offset: Option<i32>, amplitude: f64) -> UniquenessConfig {
    UniquenessConfig { ibvp: small(101, 0.02, 41, 10, vec![0]), q_list: (2..=6).collect(), offset, amplitude }
}

#[test]
fn negligible_perturbations_give_negligible_changes() {
    let r = uniqueness_probe(&delta(), &unique_cfg(Some(3), 1.0)).unwrap();
    for row in &r.fit.rows {
        assert!(row.slope >= row.q as f64 + 2.0, "{row:?}");
    }
    assert_eq!(r.verdict.outcome, Outcome::Yes, "{}", r.verdict.reason);
    assert_eq!(r.max_principle_violations, 0);
}

#[test]
fn zero_perturbation_gives_zero_change() {
    let r = uniqueness_probe(&delta(), &unique_cfg(Some(3), 0.0)).unwrap();
    assert!(r.identically_zero);
}

#[test]
fn first_order_perturbation_is_detected() {
    let r = uniqueness_probe(&delta(), &unique_cfg(None, 1.0)).unwrap();
    assert_eq!(r.verdict.outcome, Outcome::No);
    for row in &r.fit.rows {
        assert!((row.slope - 1.0).abs() <= 0.2, "{row:?}");
    }
}

#[test]
fn exponent_threshold_is_sharp() {
    let grids = NetGrids::default();
    let grid = SpaceTimeGrid::new(DomainSpec::unit(201).unwrap(), 0.1, 201).unwrap();
    let t = OrderTest::default();
    for l in [0.0, 1.0, 2.0, 4.0] {
        for s in [0.5, 1.0, 3.0] {
            let b = (l + s) / 2.0;
            assert!(exponent_threshold_holds(&grids, &grid, l, s, b + 0.1, &t).unwrap(), "L={l} s={s}");
            assert!(!exponent_threshold_holds(&grids, &grid, l, s, b - 0.1, &t).unwrap(), "L={l} s={s}");
        }
    }
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let c: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    c / (vx * vy).sqrt()
}

#[test]
fn spearman_with_ties_matches_ranked_pearson() {
    let x = [0.3, 0.1, 0.1, 0.9, 0.5];
    let y = [2.0, 1.0, 3.0, 5.0, 4.0];
    // Hand ranks with ties averaged.
    let rx = [3.0, 1.5, 1.5, 5.0, 4.0];
    let ry = [2.0, 1.0, 3.0, 5.0, 4.0];
    assert!((spearman(&x, &y) - pearson(&rx, &ry)).abs() <= 1e-15);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() <= 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solution_order_never_exceeds_datum_order(k in 0.0f64..2.5) {
        let cfg = small(51, 0.01, 16, 4, vec![0, 1]);
        let r = solve_generalized(&InitialDatum::BoundaryDecaying { power: -k }.into(), &cfg).unwrap();
        let datum = is_moderate(&r.initial.sup_norm(), &cfg.policy);
        let sol = r.verdict(&sigma0()).unwrap();
        prop_assert_eq!(datum.outcome, Outcome::Yes);
        prop_assert_eq!(sol.outcome, Outcome::Yes);
        prop_assert!(sol.order.unwrap() <= datum.order.unwrap());
        prop_assert!(verify_apriori(&r).violations.is_empty());
    }

    #[test]
    fn spearman_is_rank_invariant(v in proptest::collection::vec(-1e3f64..1e3, 3..12)) {
        let y: Vec<f64> = (0..v.len()).map(|i| i as f64).collect();
        let mapped: Vec<f64> = v.iter().map(|a| a.powi(3) + 2.0 * a).collect();
        let (a, b) = (spearman(&v, &y), spearman(&mapped, &y));
        prop_assert!((a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12);
    }
}
