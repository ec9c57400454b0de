//! Exhaustion windows, cutoff functions, restriction and traces of a
//! generalized solution.

use colombeau::domains::{build_cutoff, exhaustion, restrict, trace_boundary, trace_time, window_carrier};
use colombeau::grid::{DomainSpec, SpaceTimeGrid};
use colombeau::ibvp::{solve_generalized, IbvpConfig};
use colombeau::mollifier::InitialDatum;
use colombeau::nets::{EpsilonGrid, OrderGrid};

fn main() -> colombeau::Result<()> {
    let fine = DomainSpec::unit(1441)?;
    for l in 0..=7 {
        let (a, b) = exhaustion(&fine, l);
        let chi = build_cutoff(&fine, l)?;
        println!("Ω_{l} = ({a:.4}, {b:.4})  χ ≡ 1 on [{:.4}, {:.4}], support [{:.4}, {:.4}]", chi.plateau.0, chi.plateau.1, chi.support.0, chi.support.1);
    }

    let cfg = IbvpConfig {
        grid: SpaceTimeGrid::new(DomainSpec::unit(101)?, 0.05, 51)?,
        orders: OrderGrid::new(vec![0, 2])?,
        eps: EpsilonGrid::geometric(0.125, 2f64.powi(-8), 6, 4)?,
        ..IbvpConfig::default()
    };
    let res = solve_generalized(&InitialDatum::Delta { x0: 0.5 }.into(), &cfg)?;
    let at = trace_time(&res.solution, 0.02)?;
    let inner = restrict(&at.net, &window_carrier(&cfg.grid.domain, 2)?)?;
    println!("trace at t = {:.4}: sup over Ω̄ by cell {:?}", at.t_snapped, at.net.sup_norm().values.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
    println!("restricted to Ω̄_2: {} nodes", inner.carrier.len());
    println!("boundary trace sup {:.1e}", trace_boundary(&res.solution)?.sup_norm().max_value());
    Ok(())
}
