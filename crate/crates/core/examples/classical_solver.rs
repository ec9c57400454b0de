//! The classical solver on its reference problems: heat flow of sin(πx),
//! the pointwise ODE u' = −u³, and spatial / temporal convergence orders.

use std::f64::consts::PI;

use colombeau::grid::{DomainSpec, SpaceTimeGrid};
use colombeau::solver::{convergence_study, solve_semilinear, ReferenceProblem, Refinement, Scheme, SolverConfig};

fn main() -> colombeau::Result<()> {
    let g = SpaceTimeGrid::new(DomainSpec::unit(200)?, 0.1, 101)?;
    let cfg = SolverConfig { cubic_enabled: false, ..SolverConfig::default() }.with_dt(&g, 1e-4)?;
    let u0: Vec<f64> = g.domain.nodes().iter().map(|&x| (PI * x).sin()).collect();
    let u = solve_semilinear(&u0, &g, &cfg)?;
    let decay = (-PI * PI * 0.1f64).exp();
    let err = g.domain.nodes().iter().zip(u.final_row()).fold(0.0f64, |m, (&x, &v)| m.max((v - decay * (PI * x).sin()).abs()));
    println!("heat: relative sup error at T = 0.1: {:.3e}", err / decay);

    let og = SpaceTimeGrid::new(DomainSpec::unit(16)?, 1.0, 101)?;
    let ode = SolverConfig { laplacian_enabled: false, scheme: Scheme::CrankNicolsonNewton, ..SolverConfig::default() }.with_dt(&og, 1e-4)?;
    let v = solve_semilinear(&vec![2.0; 16], &og, &ode)?;
    println!("ode: u(1) = {:.8}, exact {:.8}", v.final_row()[7], 2.0 / 3.0);

    let cn = ReferenceProblem { config: SolverConfig { scheme: Scheme::CrankNicolsonNewton, cubic_enabled: false, ..SolverConfig::default() }, ..ReferenceProblem::linear_sine(0.1) };
    let space = convergence_study(&cn, &Refinement::Space { nx: vec![21, 41, 81], dt: 1e-4 })?;
    let time = convergence_study(&ReferenceProblem::linear_sine(0.1), &Refinement::Time { nx: 401, dt: vec![1e-3, 5e-4, 2.5e-4] })?;
    for r in space.rows.iter().chain(&time.rows) {
        println!("nx {:>4}  dt {:.1e}  error {:.4e}", r.nx, r.dt, r.error);
    }
    println!("space order {:.3}, time order {:.3}", space.fitted_order.unwrap_or(f64::NAN), time.fitted_order.unwrap_or(f64::NAN));
    Ok(())
}
