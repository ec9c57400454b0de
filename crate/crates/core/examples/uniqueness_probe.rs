//! Negligible perturbations of a δ datum change the solution negligibly;
//! an `ε¹` perturbation does not.

use colombeau::ibvp::{uniqueness_probe, GeneralizedInitialDatum, UniquenessConfig};
use colombeau::mollifier::InitialDatum;

fn main() -> colombeau::Result<()> {
    let u0: GeneralizedInitialDatum = InitialDatum::Delta { x0: 0.5 }.into();
    for offset in [Some(3), None] {
        let cfg = UniquenessConfig { offset, ..UniquenessConfig::default() };
        let rep = uniqueness_probe(&u0, &cfg)?;
        println!("perturbation {}", offset.map_or("ε^1·bump".to_string(), |o| format!("ε^(q+{o})·bump")));
        for row in &rep.fit.rows {
            println!("  q={}  slope {:+.3}  residual {:.2e}", row.q, row.slope, row.residual);
        }
        println!("  negligible: {:?} ({})", rep.verdict.outcome, rep.verdict.reason);
    }
    Ok(())
}
