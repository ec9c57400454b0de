//! Exponent fits and the moderate / negligible / order verdicts on a few
//! hand-made nets over the default (q, ε) lattice.

use colombeau::nets::{is_moderate, is_negligible, net_leq, scale_element, NegligibilityPolicy, NetGrids, OrderTest, ScalarNet};

fn main() -> colombeau::Result<()> {
    let grids = NetGrids::default();
    let policy = NegligibilityPolicy::default();
    let nets: Vec<(&str, ScalarNet)> = vec![
        ("eps^-3", ScalarNet::from_fn(&grids, |_, e, _| e.powi(-3))?),
        ("eps^q", ScalarNet::from_fn(&grids, |q, e, _| e.powi(q as i32))?),
        ("eps^(q+2)(1+q)", ScalarNet::from_fn(&grids, |q, e, _| e.powi(q as i32 + 2) * (1.0 + q as f64))?),
        ("1", ScalarNet::constant(&grids, 1.0)?),
        ("(2+cos(1/eps))/eps", ScalarNet::from_fn(&grids, |_, e, _| (2.0 + (1.0 / e).cos()) / e)?),
    ];
    for (name, n) in &nets {
        let m = is_moderate(n, &policy);
        let g = is_negligible(n, &policy);
        let slopes: Vec<String> = m.fit.rows.iter().map(|r| format!("{:+.2}", r.slope)).collect();
        println!("{name:<20} moderate {:?}({:?})  negligible {:?}  slopes [{}]", m.outcome, m.order, g.outcome, slopes.join(" "));
    }

    let t = OrderTest::default();
    for (s, r) in [(0.6, 1.0), (0.4, 1.0)] {
        let lhs = scale_element(s, &grids).powf(2.0)?.scale(10.0)?;
        println!("10·α_{s}² ≤ α_{r}: {}", net_leq(&lhs, &scale_element(r, &grids), &t)?);
    }
    Ok(())
}
