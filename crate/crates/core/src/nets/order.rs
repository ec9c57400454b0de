//! The order `x ≤ y` on generalized numbers, tested on nets.
//!
//! `x ≤ y` holds when `x(φ_ε) ≤ y(φ_ε) + ε^b` for all small ε. A finite
//! window cannot see "small enough" directly: `100·ε^{1.2} ≤ ε` is true
//! asymptotically but fails at every `ε ≥ 10^{-10}`. Each row is therefore
//! fitted by a power law on the window and the two fits are compared at a
//! probe depth far below the grid. Rows where `y` is not positive fall back
//! to the literal window inequality.

use super::fit::{fit_line, FIT_FLOOR};
use super::ScalarNet;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderTest {
    /// Exponent of the vanishing correction `ε^b`.
    pub b_test: f64,
    /// Relative slack absorbing rounding.
    pub slack: f64,
    /// ε at which the fitted power laws are compared.
    pub probe_eps: f64,
    /// Orders below this are not examined.
    pub min_order: usize,
}

impl Default for OrderTest {
    fn default() -> Self {
        OrderTest { b_test: 10.0, slack: 1e-9, probe_eps: 1e-40, min_order: 0 }
    }
}

/// `ln(e^a + e^b)` without overflow.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn row_leq(eps: &[f64], x: &[f64], y: &[f64], t: &OrderTest) -> Result<bool> {
    let direct = || {
        let scale = x.iter().chain(y).fold(1.0f64, |m, v| m.max(v.abs()));
        eps.iter().zip(x.iter().zip(y)).all(|(e, (a, b))| a - b - e.powf(t.b_test) <= t.slack * scale)
    };
    if y.iter().any(|&v| v <= FIT_FLOOR) {
        return Ok(direct());
    }
    let pos: Vec<(f64, f64)> = eps.iter().zip(x).filter(|(_, &v)| v > FIT_FLOOR).map(|(e, v)| (e.ln(), v.ln())).collect();
    if pos.is_empty() {
        return Ok(true);
    }
    if pos.len() < 2 {
        return Ok(direct());
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pos.into_iter().unzip();
    let (sx, ix, _) = fit_line(&xs, &ys)?;
    let le: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (sy, iy, _) = fit_line(&le, &ly)?;
    let p = t.probe_eps.ln();
    let lhs = sx * p + ix;
    let rhs = log_add(sy * p + iy + t.slack.ln_1p(), t.b_test * p);
    // Exact equality of the fitted lines must pass despite rounding in the fits.
    Ok(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()))
}

/// Per-order results of the order test `x ≤ y` (`None` for skipped orders).
pub fn net_leq_rows(x: &ScalarNet, y: &ScalarNet, t: &OrderTest) -> Result<Vec<Option<bool>>> {
    x.grids.check_same(&y.grids)?;
    let w = x.grids.eps.window();
    let eps = &x.grids.eps.eps_values[w.clone()];
    x.grids
        .orders
        .q_values
        .iter()
        .enumerate()
        .map(|(qi, &q)| {
            if q < t.min_order {
                return Ok(None);
            }
            row_leq(eps, &x.row(qi)[w.clone()], &y.row(qi)[w.clone()], t).map(Some)
        })
        .collect()
}

/// `x ≤ y` in the order of generalized numbers.
pub fn net_leq(x: &ScalarNet, y: &ScalarNet, t: &OrderTest) -> Result<bool> {
    Ok(net_leq_rows(x, y, t)?.into_iter().all(|r| r.unwrap_or(true)))
}
