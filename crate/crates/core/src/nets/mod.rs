//! Generalized numbers and functions as nets over a `(q, ε)` lattice.
//!
//! A [`ScalarNet`] holds one real per cell, a [`FieldNet`] one sampled field
//! per cell. Cell `(q, ε)` stores the representative evaluated at the
//! canonical order-`q` profile scaled by `ε`.

mod fit;
mod order;

pub use fit::{fit_exponent, fit_line, is_moderate, is_negligible, ExponentFit, NegligibilityPolicy, Outcome, RowFit, Verdict, FIT_FLOOR};
pub use order::{net_leq, net_leq_rows, OrderTest};

use crate::error::{Error, Result};
use crate::grid::Carrier;

/// Strictly decreasing ε values in `(0, 1]` and the number of smallest ones
/// used for exponent fits.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGrid {
    pub eps_values: Vec<f64>,
    pub fit_window: usize,
}

impl EpsilonGrid {
    pub fn new(eps_values: Vec<f64>, fit_window: usize) -> Result<Self> {
        if eps_values.is_empty() {
            return Err(Error::InvalidParameter("ε grid is empty".into()));
        }
        if eps_values.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::InvalidParameter("ε values must lie in (0, 1]".into()));
        }
        if eps_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter("ε values must be strictly decreasing".into()));
        }
        if fit_window < 2 || fit_window > eps_values.len() {
            return Err(Error::InvalidParameter(format!(
                "fit window {fit_window} must lie in [2, {}]",
                eps_values.len()
            )));
        }
        Ok(EpsilonGrid { eps_values, fit_window })
    }

    /// `count` geometrically spaced values from `eps_max` down to `eps_min`.
    pub fn geometric(eps_max: f64, eps_min: f64, count: usize, fit_window: usize) -> Result<Self> {
        if count < 2 || !(eps_min < eps_max) {
            return Err(Error::InvalidParameter(format!("need eps_min < eps_max and count ≥ 2, got {eps_min}, {eps_max}, {count}")));
        }
        let ratio = (eps_min / eps_max).powf(1.0 / (count - 1) as f64);
        let mut v: Vec<f64> = (0..count).map(|k| eps_max * ratio.powi(k as i32)).collect();
        v[count - 1] = eps_min;
        Self::new(v, fit_window)
    }

    pub fn len(&self) -> usize {
        self.eps_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_values.is_empty()
    }

    /// Index range of the fit window (the smallest ε).
    pub fn window(&self) -> std::ops::Range<usize> {
        self.len() - self.fit_window..self.len()
    }
}

impl Default for EpsilonGrid {
    /// `2^{−3}, …, 2^{−12}` with a five-point window.
    fn default() -> Self {
        EpsilonGrid { eps_values: (3..=12).map(|k| 2f64.powi(-k)).collect(), fit_window: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderGrid {
    pub q_values: Vec<usize>,
}

impl OrderGrid {
    pub fn new(q_values: Vec<usize>) -> Result<Self> {
        if q_values.is_empty() {
            return Err(Error::InvalidParameter("order grid is empty".into()));
        }
        if q_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("order grid must be increasing".into()));
        }
        Ok(OrderGrid { q_values })
    }

    pub fn up_to(q_max: usize) -> Self {
        OrderGrid { q_values: (0..=q_max).collect() }
    }

    pub fn len(&self) -> usize {
        self.q_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q_values.is_empty()
    }
}

impl Default for OrderGrid {
    fn default() -> Self {
        Self::up_to(6)
    }
}

/// The `(q, ε)` index lattice with the support diameter `i(φ)` of each
/// order's profile.
#[derive(Debug, Clone, PartialEq)]
pub struct NetGrids {
    pub orders: OrderGrid,
    pub eps: EpsilonGrid,
    pub support_diameter: Vec<f64>,
}

impl NetGrids {
    pub fn new(orders: OrderGrid, eps: EpsilonGrid, support_diameter: Vec<f64>) -> Result<Self> {
        if support_diameter.len() != orders.len() {
            return Err(Error::InvalidParameter("one support diameter per order is required".into()));
        }
        if support_diameter.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::InvalidParameter("support diameters must be positive".into()));
        }
        Ok(NetGrids { orders, eps, support_diameter })
    }

    pub fn with_diameter(orders: OrderGrid, eps: EpsilonGrid, diameter: f64) -> Result<Self> {
        let d = vec![diameter; orders.len()];
        Self::new(orders, eps, d)
    }

    pub fn n_cells(&self) -> usize {
        self.orders.len() * self.eps.len()
    }

    #[inline]
    pub fn cell(&self, qi: usize, ei: usize) -> usize {
        qi * self.eps.len() + ei
    }

    /// `(q index, ε index)` of a flat cell index.
    #[inline]
    pub fn split(&self, cell: usize) -> (usize, usize) {
        (cell / self.eps.len(), cell % self.eps.len())
    }

    pub fn check_same(&self, other: &NetGrids) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch("nets are indexed by different (q, ε) lattices".into()));
        }
        Ok(())
    }
}

impl Default for NetGrids {
    fn default() -> Self {
        NetGrids { orders: OrderGrid::default(), eps: EpsilonGrid::default(), support_diameter: vec![2.0; 7] }
    }
}

/// One real number per `(q, ε)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarNet {
    pub grids: NetGrids,
    pub values: Vec<f64>,
}

impl ScalarNet {
    pub fn new(grids: NetGrids, values: Vec<f64>) -> Result<Self> {
        if values.len() != grids.n_cells() {
            return Err(Error::GridMismatch(format!("{} values for {} cells", values.len(), grids.n_cells())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("scalar nets must be finite".into()));
        }
        Ok(ScalarNet { grids, values })
    }

    /// Builds a net from `f(q, ε, i_q)`.
    pub fn from_fn<F: Fn(usize, f64, f64) -> f64>(grids: &NetGrids, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(grids.n_cells());
        for (qi, &q) in grids.orders.q_values.iter().enumerate() {
            for &eps in &grids.eps.eps_values {
                values.push(f(q, eps, grids.support_diameter[qi]));
            }
        }
        Self::new(grids.clone(), values)
    }

    pub fn constant(grids: &NetGrids, c: f64) -> Result<Self> {
        Self::from_fn(grids, |_, _, _| c)
    }

    #[inline]
    pub fn get(&self, qi: usize, ei: usize) -> f64 {
        self.values[self.grids.cell(qi, ei)]
    }

    pub fn row(&self, qi: usize) -> &[f64] {
        let n = self.grids.eps.len();
        &self.values[qi * n..(qi + 1) * n]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.grids.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &ScalarNet, f: F) -> Result<Self> {
        self.grids.check_same(&other.grids)?;
        Self::new(self.grids.clone(), self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &ScalarNet) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarNet) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarNet) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        ScalarNet { grids: self.grids.clone(), values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn abs(&self) -> Self {
        ScalarNet { grids: self.grids.clone(), values: self.values.iter().map(|v| v.abs()).collect() }
    }

    pub fn scale(&self, k: f64) -> Result<Self> {
        self.map(|v| k * v)
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        self.map(|v| v.powf(p))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One sampled field per `(q, ε)` cell, all on one carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldNet {
    pub grids: NetGrids,
    pub carrier: Carrier,
    pub cells: Vec<Vec<f64>>,
}

impl FieldNet {
    pub fn new(grids: NetGrids, carrier: Carrier, cells: Vec<Vec<f64>>) -> Result<Self> {
        if cells.len() != grids.n_cells() {
            return Err(Error::GridMismatch(format!("{} cells for a lattice of {}", cells.len(), grids.n_cells())));
        }
        let n = carrier.len();
        for c in &cells {
            if c.len() != n {
                return Err(Error::GridMismatch(format!("cell of length {} on a carrier of {}", c.len(), n)));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("field nets must be finite".into()));
            }
        }
        Ok(FieldNet { grids, carrier, cells })
    }

    /// Builds a net from `f(q, ε, i_q) -> field`.
    pub fn from_fn<F: Fn(usize, f64, f64) -> Vec<f64>>(grids: &NetGrids, carrier: &Carrier, f: F) -> Result<Self> {
        let mut cells = Vec::with_capacity(grids.n_cells());
        for (qi, &q) in grids.orders.q_values.iter().enumerate() {
            for &eps in &grids.eps.eps_values {
                cells.push(f(q, eps, grids.support_diameter[qi]));
            }
        }
        Self::new(grids.clone(), carrier.clone(), cells)
    }

    /// `c(q, ε, i_q) · h(x…)` with `h` evaluated at the carrier nodes.
    pub fn separable<C, H>(grids: &NetGrids, carrier: &Carrier, coeff: C, profile: H) -> Result<Self>
    where
        C: Fn(usize, f64, f64) -> f64,
        H: Fn(&[f64]) -> f64,
    {
        let base = sample_on(carrier, profile);
        Self::from_fn(grids, carrier, |q, eps, iq| {
            let c = coeff(q, eps, iq);
            base.iter().map(|v| c * v).collect()
        })
    }

    pub fn zeros(grids: &NetGrids, carrier: &Carrier) -> Self {
        FieldNet { grids: grids.clone(), carrier: carrier.clone(), cells: vec![vec![0.0; carrier.len()]; grids.n_cells()] }
    }

    #[inline]
    pub fn cell(&self, qi: usize, ei: usize) -> &[f64] {
        &self.cells[self.grids.cell(qi, ei)]
    }

    fn check_compatible(&self, other: &FieldNet) -> Result<()> {
        self.grids.check_same(&other.grids)?;
        if !self.carrier.same_sampling(&other.carrier) {
            return Err(Error::GridMismatch("fields live on different carriers".into()));
        }
        Ok(())
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let cells = self.cells.iter().map(|c| c.iter().map(|&v| f(v)).collect()).collect();
        Self::new(self.grids.clone(), self.carrier.clone(), cells)
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &FieldNet, f: F) -> Result<Self> {
        self.check_compatible(other)?;
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Self::new(self.grids.clone(), self.carrier.clone(), cells)
    }

    pub fn add(&self, other: &FieldNet) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FieldNet) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &FieldNet) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        FieldNet {
            grids: self.grids.clone(),
            carrier: self.carrier.clone(),
            cells: self.cells.iter().map(|c| c.iter().map(|v| -v).collect()).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        FieldNet {
            grids: self.grids.clone(),
            carrier: self.carrier.clone(),
            cells: self.cells.iter().map(|c| c.iter().map(|v| v.abs()).collect()).collect(),
        }
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        self.map(|v| v.powf(p))
    }

    /// Multiplies every cell by the matching scalar of `k`.
    pub fn scale_by(&self, k: &ScalarNet) -> Result<Self> {
        self.grids.check_same(&k.grids)?;
        let cells = self.cells.iter().zip(&k.values).map(|(c, &s)| c.iter().map(|v| s * v).collect()).collect();
        Self::new(self.grids.clone(), self.carrier.clone(), cells)
    }

    /// Cellwise sup norm.
    pub fn sup_norm(&self) -> ScalarNet {
        ScalarNet {
            grids: self.grids.clone(),
            values: self.cells.iter().map(|c| c.iter().fold(0.0, |m, v| f64::max(m, v.abs()))).collect(),
        }
    }
}

/// Evaluates `f(coords)` at every node of `carrier` in storage order.
pub fn sample_on<H: Fn(&[f64]) -> f64>(carrier: &Carrier, f: H) -> Vec<f64> {
    let n = carrier.len();
    let dims = carrier.axes.len();
    let mut out = Vec::with_capacity(n);
    let mut idx = vec![0usize; dims];
    let mut coords = vec![0.0; dims];
    for _ in 0..n {
        for d in 0..dims {
            coords[d] = carrier.axes[d].node(idx[d]);
        }
        out.push(f(&coords));
        for d in 0..dims {
            idx[d] += 1;
            if idx[d] < carrier.axes[d].len {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

/// Binary operations of the net algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
}

/// Unary operations of the net algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Pow(f64),
}

/// Nets that support cellwise arithmetic.
pub trait NetArithmetic: Sized {
    fn binary(&self, other: &Self, op: BinaryOp) -> Result<Self>;
    fn unary(&self, op: UnaryOp) -> Result<Self>;
}

impl NetArithmetic for ScalarNet {
    fn binary(&self, other: &Self, op: BinaryOp) -> Result<Self> {
        match op {
            BinaryOp::Add => self.add(other),
            BinaryOp::Sub => self.sub(other),
            BinaryOp::Mul => self.mul(other),
        }
    }

    fn unary(&self, op: UnaryOp) -> Result<Self> {
        match op {
            UnaryOp::Neg => Ok(self.neg()),
            UnaryOp::Abs => Ok(self.abs()),
            UnaryOp::Pow(p) => self.powf(p),
        }
    }
}

impl NetArithmetic for FieldNet {
    fn binary(&self, other: &Self, op: BinaryOp) -> Result<Self> {
        match op {
            BinaryOp::Add => self.add(other),
            BinaryOp::Sub => self.sub(other),
            BinaryOp::Mul => self.mul(other),
        }
    }

    fn unary(&self, op: UnaryOp) -> Result<Self> {
        match op {
            UnaryOp::Neg => Ok(self.neg()),
            UnaryOp::Abs => Ok(self.abs()),
            UnaryOp::Pow(p) => self.powf(p),
        }
    }
}

/// `α_r^•`: cell `(q, ε)` holds `(i_q ε)^r`.
pub fn scale_element(r: f64, grids: &NetGrids) -> ScalarNet {
    ScalarNet::from_fn(grids, |_, eps, iq| (iq * eps).powf(r)).expect("scale elements are finite on (0, 1]")
}

/// The scale element of exponent `r` native to `carrier`, expressed on the
/// common ε index.
pub fn native_scale_element(r: f64, carrier: &Carrier, grids: &NetGrids) -> ScalarNet {
    scale_element(carrier.native_scale_exponent(r), grids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainSpec;

    #[test]
    fn default_eps_grid() {
        let g = EpsilonGrid::default();
        assert_eq!(g.len(), 10);
        assert_eq!(g.eps_values[0], 0.125);
        assert_eq!(g.window(), 5..10);
        assert!(EpsilonGrid::new(vec![0.5, 0.5], 2).is_err());
        assert!(EpsilonGrid::new(vec![0.5, 0.25], 3).is_err());
        let geo = EpsilonGrid::geometric(0.125, 2f64.powi(-12), 10, 5).unwrap();
        for (a, b) in geo.eps_values.iter().zip(&g.eps_values) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn scale_element_examples() {
        let grids = NetGrids::default();
        assert!(scale_element(0.0, &grids).values.iter().all(|&v| v == 1.0));
        let g = NetGrids::new(OrderGrid::up_to(0), EpsilonGrid::new(vec![0.5, 0.1, 0.05], 2).unwrap(), vec![2.0]).unwrap();
        assert!((scale_element(2.0, &g).get(0, 1) - 0.04).abs() < 1e-15);
        let g = NetGrids::new(OrderGrid::up_to(0), EpsilonGrid::new(vec![0.5, 0.125], 2).unwrap(), vec![2.0]).unwrap();
        assert_eq!(scale_element(-1.0, &g).get(0, 1), 4.0);
    }

    #[test]
    fn group_identity_and_exponent_addition() {
        let grids = NetGrids::default();
        let a = scale_element(1.3, &grids);
        let z = a.add(&a.neg()).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
        let p = scale_element(1.0, &grids).mul(&scale_element(2.0, &grids)).unwrap();
        let t = scale_element(3.0, &grids);
        for (x, y) in p.values.iter().zip(&t.values) {
            assert!((x - y).abs() <= 4.0 * f64::EPSILON * y.abs());
        }
    }

    #[test]
    fn abs_of_signed_net() {
        let grids = NetGrids::default();
        let s = ScalarNet::from_fn(&grids, |q, eps, _| if q % 2 == 0 { eps } else { -eps }).unwrap();
        let a = s.abs();
        for (qi, _) in grids.orders.q_values.iter().enumerate() {
            for (ei, &eps) in grids.eps.eps_values.iter().enumerate() {
                assert_eq!(a.get(qi, ei), eps);
            }
        }
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = scale_element(1.0, &NetGrids::default());
        let g2 = NetGrids::with_diameter(OrderGrid::up_to(3), EpsilonGrid::default(), 2.0).unwrap();
        let b = scale_element(1.0, &g2);
        assert!(matches!(a.add(&b), Err(Error::GridMismatch(_))));
        let c = DomainSpec::unit(32).unwrap().carrier();
        let d = DomainSpec::unit(33).unwrap().carrier();
        let f = FieldNet::zeros(&NetGrids::default(), &c);
        let g = FieldNet::zeros(&NetGrids::default(), &d);
        assert!(f.add(&g).is_err());
    }

    #[test]
    fn sample_on_walks_first_axis_fastest() {
        let g = crate::grid::SpaceTimeGrid::new(DomainSpec::unit(16).unwrap(), 1.0, 16).unwrap();
        let c = g.carrier();
        let v = sample_on(&c, |p| p[0] + 10.0 * p[1]);
        assert_eq!(v[1], 1.0 / 15.0);
        assert!((v[16] - 10.0 / 15.0).abs() < 1e-15);
    }
}
