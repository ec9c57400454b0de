//! Subadditivity and Leibniz inequality of the seminorms over many seeds.

use colombeau::grid::DomainSpec;
use colombeau::nets::NetGrids;
use colombeau::suite::seminorm_algebra;

fn main() -> colombeau::Result<()> {
    let grids = NetGrids::default();
    let domain = DomainSpec::unit(201)?;
    for seed in 0..20 {
        let rows = seminorm_algebra(&grids, &domain, 100, seed)?;
        let fails: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        println!("seed {seed:2}: {} of {} trials fail", fails.len(), rows.len());
        for f in fails {
            println!("    {} trial {} σ={} lhs−rhs={:.3e} tol={:.3e}", f.kind, f.trial, f.sigma, f.lhs - f.rhs, f.tolerance);
        }
    }
    Ok(())
}
