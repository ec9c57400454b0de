//! Cutoff sequence for a boundary-decaying datum, then the assembled limit.

use colombeau::ibvp::{cutoff_sequence_run, limit_assembly, CutoffRunConfig, GeneralizedInitialDatum};
use colombeau::mollifier::InitialDatum;

fn main() -> colombeau::Result<()> {
    let u0: GeneralizedInitialDatum = InitialDatum::BoundaryDecaying { power: -0.5 }.into();
    let cfg = CutoffRunConfig::default();
    let start = std::time::Instant::now();
    let rep = cutoff_sequence_run(&u0, &cfg)?;
    println!("cutoff run: {:.1}s", start.elapsed().as_secs_f64());
    for pair in &rep.pairs {
        println!(
            "p={} q={}  max sup={:.3e}  slope(q=0)={:+.3}  in W={:?}  a_pq min={:.2e}  ulps={:.2}  chain={:.2e}",
            pair.p,
            pair.q,
            pair.sup_net().max_value(),
            pair.fits[0].1.rows[0].slope,
            pair.memberships,
            pair.apq_min,
            pair.apq_identity_ulps,
            pair.chain_residual
        );
    }
    println!("p0 = {:?}", rep.p0);
    println!("min Spearman = {:.4}", rep.spearman_min());
    println!("consecutive decreasing in every cell: {}", rep.consecutive_decreasing.iter().all(|&b| b));
    println!("membership monotone: {:?}", rep.membership_monotone);
    let lim = limit_assembly(&rep, &u0)?;
    for (r, d) in lim.interior_fit.rows.iter().zip(lim.datum_fit.as_ref().map(|f| f.rows.clone()).unwrap_or_default()) {
        println!("q={}  limit residual slope {:+.3}  datum residual slope {:+.3}", r.q, r.slope, d.slope);
    }
    println!("boundary trace zero: {}", lim.boundary_zero);
    Ok(())
}
