//! Exhaustion of Ω by compact windows, smooth cutoffs, restriction to
//! sub-carriers, and the time and boundary traces of space–time fields.

use crate::error::{Error, Result};
use crate::grid::{Axis, Carrier, CarrierKind, DomainSpec};
use crate::mollifier::{build_mollifier, MollifierProfile, MollifierSpec};
use crate::nets::FieldNet;

/// Default number of grid cells required between `Ω_l` and `Ω_{l+1}`.
pub const MIN_GAP_CELLS: f64 = 8.0;

/// `δ_l = (b − a) / (2(l + 2))`.
pub fn exhaustion_margin(domain: &DomainSpec, l: usize) -> f64 {
    domain.length() / (2.0 * (l as f64 + 2.0))
}

/// `Ω_l = (a + δ_l, b − δ_l)`.
pub fn exhaustion(domain: &DomainSpec, l: usize) -> (f64, f64) {
    let d = exhaustion_margin(domain, l);
    (domain.a + d, domain.b - d)
}

/// The grid nodes of `Ω̄_l` as an interval carrier aligned with `domain`.
pub fn window_carrier(domain: &DomainSpec, l: usize) -> Result<Carrier> {
    let (lo, hi) = exhaustion(domain, l);
    let h = domain.h();
    let slack = 1e-9 * h;
    let first = ((lo - domain.a - slack) / h).ceil().max(0.0) as usize;
    let last = (((hi - domain.a + slack) / h).floor() as usize).min(domain.nx - 1);
    if last < first {
        return Err(Error::InvalidParameter(format!("window Ω̄_{l} contains no grid node")));
    }
    Ok(Carrier::interval(Axis { start: domain.a + first as f64 * h, step: h, len: last - first + 1 }))
}

/// A smooth cutoff `χ_l`: `1` on `Ω̄_l`, `0` outside a compact subset of
/// `Ω_{l+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFamily {
    pub level: usize,
    pub field: Vec<f64>,
    /// Closed interval on which `χ_l ≡ 1`.
    pub plateau: (f64, f64),
    /// Closed interval outside which `χ_l ≡ 0`.
    pub support: (f64, f64),
}

/// Builds `χ_l` by convolving the indicator of the midway interval between
/// `Ω_l` and `Ω_{l+1}` with a normalized bump of width `0.45` gap.
pub fn build_cutoff(domain: &DomainSpec, l: usize) -> Result<CutoffFamily> {
    build_cutoff_with(domain, l, MIN_GAP_CELLS, &cutoff_profile()?)
}

/// The normalized order-0 bump whose cumulative integral shapes the cutoffs.
pub fn cutoff_profile() -> Result<MollifierProfile> {
    build_mollifier(MollifierSpec::with_order(0))
}

/// [`build_cutoff`] with an explicit resolution requirement and profile.
pub fn build_cutoff_with(domain: &DomainSpec, l: usize, min_gap_cells: f64, profile: &MollifierProfile) -> Result<CutoffFamily> {
    let gap = exhaustion_margin(domain, l) - exhaustion_margin(domain, l + 1);
    let cells = gap / domain.h();
    if cells < min_gap_cells * (1.0 - 1e-9) {
        return Err(Error::UnresolvableCutoffGap { level: l, cells, required: min_gap_cells });
    }
    let inner = exhaustion_margin(domain, l + 1);
    let m1 = domain.a + inner + 0.5 * gap;
    let m2 = domain.b - inner - 0.5 * gap;
    let w = 0.45 * gap / profile.radius();
    let field = domain
        .nodes()
        .iter()
        .map(|&x| Ok((profile.cumulative((x - m1) / w)? - profile.cumulative((x - m2) / w)?).clamp(0.0, 1.0)))
        .collect::<Result<Vec<f64>>>()?;
    let reach = w * profile.radius();
    Ok(CutoffFamily { level: l, field, plateau: (m1 + reach, m2 - reach), support: (m1 - reach, m2 + reach) })
}

fn axis_offset(outer: &Axis, inner: &Axis) -> Result<usize> {
    if inner.len == 0 {
        return Err(Error::GridMismatch("empty sub-axis".into()));
    }
    if inner.len > 1 && (inner.step - outer.step).abs() > 1e-9 * outer.step.abs().max(1e-300) {
        return Err(Error::GridMismatch(format!("step {} is not the carrier step {}", inner.step, outer.step)));
    }
    let k = if outer.step == 0.0 { 0.0 } else { (inner.start - outer.start) / outer.step };
    let kr = k.round();
    if (k - kr).abs() > 1e-6 || kr < 0.0 || kr as usize + inner.len > outer.len {
        return Err(Error::GridMismatch(format!("sub-axis starting at {} is not aligned with the carrier", inner.start)));
    }
    Ok(kr as usize)
}

/// Copies the samples of `f` at the nodes of `sub` (no interpolation).
pub fn restrict(f: &FieldNet, sub: &Carrier) -> Result<FieldNet> {
    if sub.axes.len() != f.carrier.axes.len() {
        return Err(Error::GridMismatch("carriers have different dimensions".into()));
    }
    let offsets = f.carrier.axes.iter().zip(&sub.axes).map(|(o, i)| axis_offset(o, i)).collect::<Result<Vec<_>>>()?;
    let strides = f.carrier.strides();
    let mut index = Vec::with_capacity(sub.len());
    let mut pos = vec![0usize; sub.axes.len()];
    for _ in 0..sub.len() {
        index.push(pos.iter().zip(&offsets).zip(&strides).map(|((p, o), s)| (p + o) * s).sum::<usize>());
        for d in 0..pos.len() {
            pos[d] += 1;
            if pos[d] < sub.axes[d].len {
                break;
            }
            pos[d] = 0;
        }
    }
    let cells = f.cells.iter().map(|c| index.iter().map(|&i| c[i]).collect()).collect();
    let carrier = Carrier { kind: f.carrier.kind, axes: sub.axes.clone() };
    FieldNet::new(f.grids.clone(), carrier, cells)
}

/// A time slice with the distance between the requested and used time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub net: FieldNet,
    pub t_requested: f64,
    pub t_snapped: f64,
    pub snap_distance: f64,
}

/// `f_{t₀}`: the slice of a space–time net at the time node nearest `t0`.
pub fn trace_time(f: &FieldNet, t0: f64) -> Result<TimeTrace> {
    if f.carrier.kind != CarrierKind::SpaceTime {
        return Err(Error::GridMismatch("time traces need a space–time carrier".into()));
    }
    let (xa, ta) = (f.carrier.axes[0], f.carrier.axes[1]);
    let t_final = ta.end();
    if !(t0 >= ta.start - 1e-12 && t0 <= t_final + 1e-12) {
        return Err(Error::TimeOutOfRange { t0, t_final });
    }
    let k = ta.nearest(t0);
    let t_snapped = ta.node(k);
    let cells = f.cells.iter().map(|c| c[k * xa.len..(k + 1) * xa.len].to_vec()).collect();
    let net = FieldNet::new(f.grids.clone(), Carrier::interval(xa), cells)?;
    Ok(TimeTrace { net, t_requested: t0, t_snapped, snap_distance: (t0 - t_snapped).abs() })
}

/// `ρ_Q`: the two boundary trajectories `x = a` and `x = b` of a
/// space–time net.
pub fn trace_boundary(f: &FieldNet) -> Result<FieldNet> {
    if f.carrier.kind != CarrierKind::SpaceTime {
        return Err(Error::GridMismatch("boundary traces need a space–time carrier".into()));
    }
    let (xa, ta) = (f.carrier.axes[0], f.carrier.axes[1]);
    let nx = xa.len;
    let cells = f
        .cells
        .iter()
        .map(|c| (0..ta.len).flat_map(|k| [c[k * nx], c[k * nx + nx - 1]]).collect())
        .collect();
    let carrier = Carrier { kind: CarrierKind::Boundary, axes: vec![Axis { start: xa.start, step: xa.end() - xa.start, len: 2 }, ta] };
    FieldNet::new(f.grids.clone(), carrier, cells)
}

/// Extends a net on an interval to a time-constant net on `Ω̄ × time`.
pub fn time_constant(f: &FieldNet, time: Axis) -> Result<FieldNet> {
    if f.carrier.kind != CarrierKind::Interval {
        return Err(Error::GridMismatch("time-constant embedding needs an interval carrier".into()));
    }
    let cells = f.cells.iter().map(|c| c.iter().copied().cycle().take(c.len() * time.len).collect()).collect();
    let carrier = Carrier { kind: CarrierKind::SpaceTime, axes: vec![f.carrier.axes[0], time] };
    FieldNet::new(f.grids.clone(), carrier, cells)
}

/// Multiplies every cell of a net on `Ω̄` by a fixed field (a cutoff).
pub fn multiply_field(f: &FieldNet, field: &[f64]) -> Result<FieldNet> {
    if field.len() != f.carrier.len() {
        return Err(Error::GridMismatch(format!("field of length {} on a carrier of {}", field.len(), f.carrier.len())));
    }
    let cells = f.cells.iter().map(|c| c.iter().zip(field).map(|(a, b)| a * b).collect()).collect();
    FieldNet::new(f.grids.clone(), f.carrier.clone(), cells)
}

/// Smallest `l₀ ≤ l_max` such that `(χ_l·f − f)` vanishes exactly on
/// `Ω̄_ν` for every `l₀ ≤ l ≤ l_max`.
pub fn cutoff_density_level(f: &FieldNet, domain: &DomainSpec, nu: usize, l_max: usize) -> Result<Option<usize>> {
    let window = window_carrier(domain, nu)?;
    let profile = cutoff_profile()?;
    let mut exact = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let chi = build_cutoff_with(domain, l, MIN_GAP_CELLS, &profile)?;
        let diff = multiply_field(f, &chi.field)?.sub(f)?;
        let r = restrict(&diff, &window)?;
        exact.push(r.cells.iter().all(|c| c.iter().all(|&v| v == 0.0)));
    }
    Ok(match exact.iter().rposition(|&e| !e) {
        None => Some(0),
        Some(k) if k < l_max => Some(k + 1),
        Some(_) => None,
    })
}
