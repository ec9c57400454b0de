//! The δ datum on the default lattice: moderateness verdicts, trace
//! residuals and the a priori bounds.

use colombeau::ibvp::{solve_generalized, verify_apriori, IbvpConfig};
use colombeau::mollifier::InitialDatum;

fn main() -> colombeau::Result<()> {
    let cfg = IbvpConfig::default();
    let start = std::time::Instant::now();
    let res = solve_generalized(&InitialDatum::Delta { x0: 0.5 }.into(), &cfg)?;
    println!("solved {} cells in {:.1}s", res.cells.len(), start.elapsed().as_secs_f64());
    for (sigma, v) in &res.moderate_verdicts {
        let slopes: Vec<String> = v.fit.rows.iter().map(|r| format!("{:+.3}", r.slope)).collect();
        println!("σ={sigma}  {:?} N={:?}  slopes [{}]", v.outcome, v.order, slopes.join(", "));
    }
    println!("initial trace residual max {:.3e}", res.initial_trace_residual.max_value());
    println!("boundary trace residual max {:.3e}", res.boundary_trace_residual.max_value());
    let rep = verify_apriori(&res);
    println!("a priori: {} violations over {} cells, max smoothing ratio {:.4}", rep.violations.len(), rep.cells_checked, rep.max_smoothing_ratio);
    Ok(())
}
