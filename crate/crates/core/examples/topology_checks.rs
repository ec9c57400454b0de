//! Seminorm algebra, scale inequalities, filter axioms, trace continuity,
//! cutoff density and the Cauchy-limit constructor on synthetic nets.

use colombeau::grid::{DomainSpec, SpaceTimeGrid};
use colombeau::nets::{EpsilonGrid, NetGrids, OrderGrid, OrderTest};
use colombeau::suite;
use colombeau::topology::{check_filter_axioms, Axiom, FilterAxiomConfig, PowerLawGenerator};

fn main() -> colombeau::Result<()> {
    let grids = NetGrids::default();
    let domain = DomainSpec::unit(201)?;
    let test = OrderTest::default();

    let algebra = suite::seminorm_algebra(&grids, &domain, 100, 11)?;
    for kind in ["subadditivity", "leibniz"] {
        let rows: Vec<_> = algebra.iter().filter(|t| t.kind == kind).collect();
        println!("{kind}: {}/{} pass", rows.iter().filter(|t| t.pass).count(), rows.len());
    }

    let scale = suite::scale_battery(&grids, &test)?;
    println!("scale inequalities: {}/{} as expected", scale.iter().filter(|c| c.pass()).count(), scale.len());

    let mut gen = PowerLawGenerator::new(grids.clone(), domain.carrier(), 7);
    let axioms = check_filter_axioms(&mut gen, &FilterAxiomConfig::default())?;
    for a in [Axiom::Sum, Axiom::Product, Axiom::Absorption] {
        let (p, n) = axioms.counts(a);
        println!("filter axiom {}: {p}/{n}", a.name());
    }

    let grid = SpaceTimeGrid::new(DomainSpec::unit(101)?, 0.1, 51)?;
    let traces = suite::trace_battery(&grids, &grid, 1, 1.0, 50, 13, &test)?;
    for s in [2.5, 1.5] {
        let rows: Vec<_> = traces.iter().filter(|c| c.s == s).collect();
        println!("trace continuity s={s}: {}/{} members", rows.iter().filter(|c| c.member).count(), rows.len());
    }

    let fine = DomainSpec::unit(1441)?;
    for case in suite::cutoff_density_battery(&grids, &fine, 5, 7, 17)? {
        println!("cutoff density {} on window {}: l0 = {:?}", case.name, case.nu, case.l0);
    }

    let wide = NetGrids::with_diameter(OrderGrid::up_to(12), EpsilonGrid::default(), 2.0)?;
    for case in suite::cauchy_limit_battery(&wide, &grid, 8, 19, &test)? {
        println!("cauchy limit λ={} p={}: members {:?} θ={:?}", case.lambda, case.p, case.member, case.theta);
    }
    Ok(())
}
