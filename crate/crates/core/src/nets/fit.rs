//! Power-law fits over the small-ε window and the moderate / negligible
//! verdicts built on them.

use super::ScalarNet;
use crate::error::{Error, Result};

/// Values below this are floored before taking logarithms.
pub const FIT_FLOOR: f64 = 1e-300;

/// Least-squares line `y ≈ slope·x + intercept` and the RMS residual.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::InsufficientFitPoints(n.min(ys.len())));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientFitPoints(1));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok((slope, intercept, (rss / nf).sqrt()))
}

/// Fit of one order row: `|value| ≈ exp(intercept)·ε^slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowFit {
    pub q: usize,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// Every window value was at or below [`FIT_FLOOR`]; `slope` is `+∞`.
    pub identically_zero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub rows: Vec<RowFit>,
}

impl ExponentFit {
    pub fn slope_per_q(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.slope).collect()
    }

    pub fn intercept_per_q(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.intercept).collect()
    }

    pub fn residual_per_q(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.residual).collect()
    }
}

/// Fits `log|value|` against `log ε` on the net's fit window, per order.
pub fn fit_exponent(net: &ScalarNet) -> Result<ExponentFit> {
    let eps = &net.grids.eps;
    let window = eps.window();
    if window.len() < 2 {
        return Err(Error::InsufficientFitPoints(window.len()));
    }
    let xs: Vec<f64> = eps.eps_values[window.clone()].iter().map(|e| e.ln()).collect();
    let mut rows = Vec::with_capacity(net.grids.orders.len());
    for (qi, &q) in net.grids.orders.q_values.iter().enumerate() {
        let row = &net.row(qi)[window.clone()];
        if row.iter().all(|v| v.abs() <= FIT_FLOOR) {
            rows.push(RowFit { q, slope: f64::INFINITY, intercept: FIT_FLOOR.ln(), residual: 0.0, identically_zero: true });
            continue;
        }
        let ys: Vec<f64> = row.iter().map(|v| v.abs().max(FIT_FLOOR).ln()).collect();
        let (slope, intercept, residual) = fit_line(&xs, &ys)?;
        rows.push(RowFit { q, slope, intercept, residual, identically_zero: false });
    }
    Ok(ExponentFit { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    Inconclusive,
}

/// A three-valued membership verdict with the fit it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// The moderateness order `N` when `outcome` is `Yes` for [`is_moderate`].
    pub order: Option<i64>,
    /// Slope of `e(q)` against the gauge, when it could be fitted.
    pub gauge_slope: Option<f64>,
    pub fit: ExponentFit,
    pub reason: String,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }
}

/// Thresholds for reading (M) and (N) off fitted exponents.
#[derive(Debug, Clone, Copy)]
pub struct NegligibilityPolicy {
    /// `γ(q)`; must be increasing on the order grid.
    pub gauge: fn(usize) -> f64,
    pub offset_n: u32,
    pub min_gauge_slope: f64,
    pub residual_max: f64,
    /// Slopes below this count as faster than any power.
    pub divergence_slope: f64,
    /// Absorbs fit noise before `N = ⌈max(−e(q))⌉` is rounded up.
    pub slope_tolerance: f64,
    /// Orders below this are not examined (the `∃N` in the definition).
    pub min_order: usize,
}

fn identity_gauge(q: usize) -> f64 {
    q as f64
}

impl Default for NegligibilityPolicy {
    fn default() -> Self {
        NegligibilityPolicy {
            gauge: identity_gauge,
            offset_n: 2,
            min_gauge_slope: 0.8,
            residual_max: 0.15,
            divergence_slope: -50.0,
            slope_tolerance: 0.05,
            min_order: 0,
        }
    }
}

fn verdict(outcome: Outcome, order: Option<i64>, gauge_slope: Option<f64>, fit: ExponentFit, reason: impl Into<String>) -> Verdict {
    Verdict { outcome, order, gauge_slope, fit, reason: reason.into() }
}

/// Reads moderateness off the fitted exponents.
pub fn is_moderate(net: &ScalarNet, policy: &NegligibilityPolicy) -> Verdict {
    let fit = match fit_exponent(net) {
        Ok(f) => f,
        Err(e) => return verdict(Outcome::Inconclusive, None, None, ExponentFit { rows: vec![] }, e.to_string()),
    };
    let rows: Vec<RowFit> = fit.rows.iter().copied().filter(|r| r.q >= policy.min_order && !r.identically_zero).collect();
    if let Some(r) = rows.iter().find(|r| r.slope < policy.divergence_slope) {
        let reason = format!("q = {} grows like ε^{:.3}", r.q, r.slope);
        return verdict(Outcome::No, None, None, fit, reason);
    }
    if let Some(r) = rows.iter().find(|r| r.residual > policy.residual_max) {
        let reason = format!("q = {} residual {:.3} exceeds {}", r.q, r.residual, policy.residual_max);
        return verdict(Outcome::Inconclusive, None, None, fit, reason);
    }
    let worst = rows.iter().map(|r| -r.slope).fold(f64::NEG_INFINITY, f64::max);
    let order = if worst.is_finite() { (worst - policy.slope_tolerance).ceil() as i64 } else { 0 };
    verdict(Outcome::Yes, Some(order), None, fit, format!("bounded by ε^{{-{order}}}"))
}

/// Reads negligibility off the fitted exponents.
pub fn is_negligible(net: &ScalarNet, policy: &NegligibilityPolicy) -> Verdict {
    let fit = match fit_exponent(net) {
        Ok(f) => f,
        Err(e) => return verdict(Outcome::Inconclusive, None, None, ExponentFit { rows: vec![] }, e.to_string()),
    };
    let rows: Vec<RowFit> = fit.rows.iter().copied().filter(|r| r.q >= policy.min_order).collect();
    if let Some(r) = rows.iter().find(|r| !r.identically_zero && r.residual > policy.residual_max) {
        let reason = format!("q = {} residual {:.3} exceeds {}", r.q, r.residual, policy.residual_max);
        return verdict(Outcome::Inconclusive, None, None, fit, reason);
    }
    let offset = policy.offset_n as f64;
    if let Some(r) = rows.iter().find(|r| r.slope < (policy.gauge)(r.q) - offset) {
        let reason = format!("q = {}: exponent {:.3} below gauge {} − {}", r.q, r.slope, (policy.gauge)(r.q), offset);
        return verdict(Outcome::No, None, None, fit, reason);
    }
    let finite: Vec<&RowFit> = rows.iter().filter(|r| r.slope.is_finite()).collect();
    if finite.len() < 2 {
        return verdict(Outcome::Yes, None, None, fit, "exponents dominate the gauge");
    }
    let gs: Vec<f64> = finite.iter().map(|r| (policy.gauge)(r.q)).collect();
    let es: Vec<f64> = finite.iter().map(|r| r.slope).collect();
    match fit_line(&gs, &es) {
        Ok((gauge_slope, _, _)) if gauge_slope >= policy.min_gauge_slope => {
            verdict(Outcome::Yes, None, Some(gauge_slope), fit, "exponents grow with the gauge")
        }
        Ok((gauge_slope, _, _)) => verdict(
            Outcome::No,
            None,
            Some(gauge_slope),
            fit,
            format!("exponents grow at rate {gauge_slope:.3} < {} against the gauge", policy.min_gauge_slope),
        ),
        Err(e) => verdict(Outcome::Inconclusive, None, None, fit, e.to_string()),
    }
}
