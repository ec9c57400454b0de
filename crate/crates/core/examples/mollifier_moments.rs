//! Canonical mollifiers of order 0..6: vanishing moments, the first
//! surviving moment, and a mollified δ on a coarse grid.

use colombeau::grid::DomainSpec;
use colombeau::mollifier::{build_mollifier, moment, mollify, InitialDatum, MollifierSpec};

fn main() -> colombeau::Result<()> {
    for q in 0..=6 {
        let p = build_mollifier(MollifierSpec::with_order(q))?;
        let worst = (0..=q).map(|j| (moment(&p, j).unwrap() - if j == 0 { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max);
        let next = moment(&p, q + 1)?;
        println!("q={q}  worst moment error {worst:.2e}  moment {} = {next:+.4e}  max|φ| {:.4}", q + 1, p.max_abs());
    }

    let p = build_mollifier(MollifierSpec::with_order(2))?;
    let dom = DomainSpec::unit(41)?;
    let f = mollify(&InitialDatum::Delta { x0: 0.5 }, &p, 0.125, &dom)?;
    for (x, v) in dom.nodes().iter().zip(&f).skip(14).take(13) {
        println!("{x:.3}  {v:+.5}");
    }
    Ok(())
}
