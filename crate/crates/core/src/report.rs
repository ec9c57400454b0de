//! CSV tables written by the experiments.
//!
//! Floats use `{:.16e}` (17 significant digits), records end in `\n`, and
//! row order follows the `(q, ε)` lattice, so equal inputs give equal bytes.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ibvp::CutoffReport;
use crate::nets::{FieldNet, ScalarNet, Verdict};
use crate::topology::{FilterAxiomReport, MultiIndex};

/// A CSV table; `pass` names the column that carries pass/fail flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pass: Option<usize>,
}

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_b(b: bool) -> String {
    b.to_string()
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&str]) -> Self {
        Table { file: file.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), pass: header.iter().position(|&h| h == "pass") }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Indices of rows with `pass = false`.
    pub fn failures(&self) -> Vec<usize> {
        match self.pass {
            Some(k) => self.rows.iter().enumerate().filter(|(_, r)| r[k] == "false").map(|(i, _)| i).collect(),
            None => Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(&self.file);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path).map_err(csv_err)?;
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(path)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// `(q, eps, value)`.
pub fn scalar_net(file: &str, net: &ScalarNet) -> Table {
    let mut t = Table::new(file, &["q", "eps", "value"]);
    for c in 0..net.grids.n_cells() {
        let (qi, ei) = net.grids.split(c);
        t.push(vec![net.grids.orders.q_values[qi].to_string(), fmt_f(net.grids.eps.eps_values[ei]), fmt_f(net.values[c])]);
    }
    t
}

/// `(q, eps, i0, …, value)` with one index column per carrier axis.
pub fn field_net(file: &str, net: &FieldNet) -> Table {
    let dims = net.carrier.axes.len();
    let mut header = vec!["q".to_string(), "eps".to_string()];
    header.extend((0..dims).map(|d| format!("i{d}")));
    header.push("value".into());
    let mut t = Table { file: file.into(), header, rows: Vec::new(), pass: None };
    let strides = net.carrier.strides();
    for c in 0..net.grids.n_cells() {
        let (qi, ei) = net.grids.split(c);
        for (k, v) in net.cells[c].iter().enumerate() {
            let mut row = vec![net.grids.orders.q_values[qi].to_string(), fmt_f(net.grids.eps.eps_values[ei])];
            row.extend((0..dims).map(|d| ((k / strides[d]) % net.carrier.axes[d].len).to_string()));
            row.push(fmt_f(*v));
            t.push(row);
        }
    }
    t
}

/// `(q, eps, sigma, value)`.
pub fn seminorm_nets(file: &str, nets: &[(MultiIndex, ScalarNet)]) -> Table {
    let mut t = Table::new(file, &["q", "eps", "sigma", "value"]);
    for (sigma, net) in nets {
        for c in 0..net.grids.n_cells() {
            let (qi, ei) = net.grids.split(c);
            t.push(vec![net.grids.orders.q_values[qi].to_string(), fmt_f(net.grids.eps.eps_values[ei]), sigma.to_string(), fmt_f(net.values[c])]);
        }
    }
    t
}

/// Short verdict label: `yes(N)`, `yes`, `no`, `inconclusive`.
pub fn verdict_label(v: &Verdict) -> String {
    use crate::nets::Outcome::*;
    match (v.outcome, v.order) {
        (Yes, Some(n)) => format!("yes({n})"),
        (Yes, None) => "yes".into(),
        (No, _) => "no".into(),
        (Inconclusive, _) => "inconclusive".into(),
    }
}

/// `(q, slope, intercept, residual, verdict)`.
pub fn exponent_fit(file: &str, v: &Verdict) -> Table {
    let mut t = Table::new(file, &["q", "slope", "intercept", "residual", "verdict"]);
    let label = verdict_label(v);
    for r in &v.fit.rows {
        t.push(vec![r.q.to_string(), fmt_f(r.slope), fmt_f(r.intercept), fmt_f(r.residual), label.clone()]);
    }
    t
}

/// `(p, q_pair, sigma, fitted_exponent, in_W_target, pass)`: one row per
/// pair and target. `fitted_exponent` is the smallest slope over the
/// mollifier orders of `‖u_p − u_q‖_σ`; `pass` requires the sup trend,
/// `a_pq ≥ 0`, and membership that never switches off as `min(p, q)` grows.
pub fn cauchy(file: &str, rep: &CutoffReport) -> Table {
    let mut t = Table::new(file, &["p", "q_pair", "sigma", "fitted_exponent", "in_W_target", "pass"]);
    let trend = rep.trend_ok();
    for pair in &rep.pairs {
        for (ti, target) in rep.config.targets.iter().enumerate() {
            let slope = pair.fits.iter().find(|(k, _)| *k == target.sigma).map(|(_, f)| f.rows.iter().map(|r| r.slope).fold(f64::INFINITY, f64::min)).unwrap_or(f64::NAN);
            let pass = trend && pair.apq_min >= 0.0 && rep.membership_monotone[ti];
            t.push(vec![pair.p.to_string(), pair.q.to_string(), target.sigma.to_string(), fmt_f(slope), fmt_b(pair.memberships[ti]), fmt_b(pass)]);
        }
    }
    t
}

/// `(axiom, trial, pass, counterexample_id)`.
pub fn axioms(file: &str, rep: &FilterAxiomReport) -> Table {
    let mut t = Table::new(file, &["axiom", "trial", "pass", "counterexample_id"]);
    for tr in &rep.trials {
        t.push(vec![tr.axiom.name().into(), tr.trial.to_string(), fmt_b(tr.pass), tr.counterexample_id.clone().unwrap_or_default()]);
    }
    t
}

/// `(t, x, value)` for one cell of a space–time net, every `stride`-th
/// node along each axis.
pub fn trajectory(file: &str, net: &FieldNet, cell: usize, stride: usize) -> Table {
    let mut t = Table::new(file, &["t", "x", "value"]);
    let (xa, ta) = (net.carrier.axes[0], net.carrier.axes[1]);
    let stride = stride.max(1);
    for k in (0..ta.len).step_by(stride) {
        for i in (0..xa.len).step_by(stride) {
            t.push(vec![fmt_f(ta.node(k)), fmt_f(xa.node(i)), fmt_f(net.cells[cell][k * xa.len + i])]);
        }
    }
    t
}
