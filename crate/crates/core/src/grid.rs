//! Sampling grids: the closed interval Ω̄, the cylinder Q̄ = Ω̄ × [0, T]
//! and the lateral boundary Q* = ∂Ω × [0, T].
//!
//! Field data on a [`Carrier`] is stored with the first axis fastest, so a
//! space–time field is a sequence of spatial rows, one per time node.

use crate::error::{Error, Result};

/// Spatial dimension of the base problem. The architecture keeps the
/// mollifier dimension of each carrier explicit, but only `m = 1` is built.
pub const SPACE_DIM: usize = 1;

/// A uniform axis `start + i * step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn uniform(a: f64, b: f64, len: usize) -> Self {
        let step = if len > 1 { (b - a) / (len - 1) as f64 } else { 0.0 };
        Axis { start: a, step, len }
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.node(self.len.saturating_sub(1))
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.node(i)).collect()
    }

    /// Index of the node nearest to `x` (clamped).
    pub fn nearest(&self, x: f64) -> usize {
        if self.len <= 1 || self.step == 0.0 {
            return 0;
        }
        let k = ((x - self.start) / self.step).round();
        k.clamp(0.0, (self.len - 1) as f64) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierKind {
    /// A closed interval: Ω̄ or one of its compact windows Ω̄_l.
    Interval,
    /// The closed cylinder Q̄ with axes (x, t).
    SpaceTime,
    /// The lateral boundary ∂Ω × [0, T]; the first axis holds the two
    /// endpoints `a` and `b`.
    Boundary,
}

/// The sampling set a field lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct Carrier {
    pub kind: CarrierKind,
    pub axes: Vec<Axis>,
}

impl Carrier {
    pub fn interval(axis: Axis) -> Self {
        Carrier { kind: CarrierKind::Interval, axes: vec![axis] }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension of the mollifier index that represents fields on this
    /// carrier (`m` on Ω̄, `m + 1` on Q̄ and on Q*).
    pub fn index_dim(&self) -> usize {
        match self.kind {
            CarrierKind::Interval => SPACE_DIM,
            CarrierKind::SpaceTime | CarrierKind::Boundary => SPACE_DIM + 1,
        }
    }

    /// Exponent that the scale element `α_r` of this carrier carries when
    /// expressed on the common `m`-dimensional ε index.
    ///
    /// A mollifier of dimension `d` relates to the base index through
    /// `i(I(ψ_ε)) ~ ε^{m/d}`, so `α_r^{(d)}` is represented by `(i ε)^{r m / d}`.
    pub fn native_scale_exponent(&self, r: f64) -> f64 {
        r * SPACE_DIM as f64 / self.index_dim() as f64
    }

    /// Strides of each axis in the flat storage.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.axes.len());
        let mut acc = 1;
        for a in &self.axes {
            s.push(acc);
            acc *= a.len;
        }
        s
    }

    pub fn same_sampling(&self, other: &Carrier) -> bool {
        self.kind == other.kind
            && self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(p, q)| {
                p.len == q.len && (p.start - q.start).abs() <= 1e-12 * (1.0 + p.start.abs()) && (p.step - q.step).abs() <= 1e-12 * (1.0 + p.step.abs())
            })
    }
}

/// Ω = (a, b) sampled at `nx` uniform nodes including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub a: f64,
    pub b: f64,
    pub nx: usize,
}

impl DomainSpec {
    pub fn new(a: f64, b: f64, nx: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("domain needs a < b, got ({a}, {b})")));
        }
        if nx < 16 {
            return Err(Error::InvalidParameter(format!("nx must be at least 16, got {nx}")));
        }
        Ok(DomainSpec { a, b, nx })
    }

    pub fn unit(nx: usize) -> Result<Self> {
        Self::new(0.0, 1.0, nx)
    }

    pub fn axis(&self) -> Axis {
        Axis::uniform(self.a, self.b, self.nx)
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.nx - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.axis().nodes()
    }

    pub fn carrier(&self) -> Carrier {
        Carrier::interval(self.axis())
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

/// Q̄ = Ω̄ × [0, T] with `nt` stored time nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid {
    pub domain: DomainSpec,
    pub t_final: f64,
    pub nt: usize,
}

impl SpaceTimeGrid {
    pub fn new(domain: DomainSpec, t_final: f64, nt: usize) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidParameter(format!("T must be positive, got {t_final}")));
        }
        if nt < 16 {
            return Err(Error::InvalidParameter(format!("nt must be at least 16, got {nt}")));
        }
        Ok(SpaceTimeGrid { domain, t_final, nt })
    }

    pub fn time_axis(&self) -> Axis {
        Axis::uniform(0.0, self.t_final, self.nt)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / (self.nt - 1) as f64
    }

    pub fn carrier(&self) -> Carrier {
        Carrier { kind: CarrierKind::SpaceTime, axes: vec![self.domain.axis(), self.time_axis()] }
    }

    pub fn boundary_carrier(&self) -> Carrier {
        Carrier {
            kind: CarrierKind::Boundary,
            axes: vec![Axis { start: self.domain.a, step: self.domain.length(), len: 2 }, self.time_axis()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_validation() {
        assert!(DomainSpec::new(1.0, 0.0, 32).is_err());
        assert!(DomainSpec::new(0.0, 1.0, 15).is_err());
        let d = DomainSpec::unit(201).unwrap();
        assert_eq!(d.nodes()[100], 0.5);
        assert_eq!(d.axis().end(), 1.0);
    }

    #[test]
    fn native_scale_halves_on_space_time() {
        let g = SpaceTimeGrid::new(DomainSpec::unit(32).unwrap(), 1.0, 32).unwrap();
        assert_eq!(g.carrier().native_scale_exponent(3.0), 1.5);
        assert_eq!(g.boundary_carrier().native_scale_exponent(3.0), 1.5);
        assert_eq!(g.domain.carrier().native_scale_exponent(3.0), 3.0);
        assert_eq!(g.carrier().len(), 32 * 32);
        assert_eq!(g.carrier().strides(), vec![1, 32]);
    }

    #[test]
    fn nearest_clamps() {
        let a = Axis::uniform(0.0, 1.0, 11);
        assert_eq!(a.nearest(0.34), 3);
        assert_eq!(a.nearest(-5.0), 0);
        assert_eq!(a.nearest(7.0), 10);
    }
}
