//! Sharp-topology seminorms, neighborhoods and the Cauchy-limit construction.
//!
//! Seminorms are sups of finite-difference derivatives. Only derivative
//! orders up to a per-axis budget (2 by default) are available, so the
//! "for all σ" of the neighborhood definitions is truncated to that budget.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, Carrier, CarrierKind};
use crate::nets::{native_scale_element, net_leq, scale_element, FieldNet, NetGrids, OrderTest, ScalarNet};

/// Highest finite-difference order per axis.
pub const DERIVATIVE_BUDGET: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub components: Vec<usize>,
}

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex { components }
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex { components: vec![0; dim] }
    }

    /// `σ_i = (i, …, i)`.
    pub fn diagonal(i: usize, dim: usize) -> Self {
        MultiIndex { components: vec![i; dim] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components.iter().sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.components.iter().zip(&other.components).all(|(a, b)| a <= b)
    }

    /// `self − other`; requires `other ≤ self`.
    pub fn minus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex { components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect() }
    }

    /// All `κ ≤ self`, the first component varying fastest.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.dim())];
        for d in 0..self.dim() {
            let mut next = Vec::new();
            for k in 0..=self.components[d] {
                for m in &out {
                    let mut c = m.components.clone();
                    c[d] = k;
                    next.push(MultiIndex { components: c });
                }
            }
            out = next;
        }
        out
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(";"))
    }
}

/// `C(n, k)` in integer arithmetic.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Multi-index binomial `∏ C(σ_d, κ_d)`.
pub fn multi_binomial(sigma: &MultiIndex, kappa: &MultiIndex) -> u64 {
    sigma.components.iter().zip(&kappa.components).map(|(&s, &k)| binomial(s, k)).product()
}

fn check_budget(sigma: &MultiIndex, budget: usize) -> Result<()> {
    for (axis, &o) in sigma.components.iter().enumerate() {
        if o > budget {
            return Err(Error::DerivativeBudget { axis, order: o, budget });
        }
    }
    Ok(())
}

/// Second-order accurate derivative of order `order ∈ {0, 1, 2}` along one
/// line of samples; one-sided stencils at both ends.
fn diff_line(src: &[f64], h: f64, order: usize, out: &mut [f64]) {
    let n = src.len();
    match order {
        0 => out.copy_from_slice(src),
        1 => {
            let c = 0.5 / h;
            out[0] = (-3.0 * src[0] + 4.0 * src[1] - src[2]) * c;
            for i in 1..n - 1 {
                out[i] = (src[i + 1] - src[i - 1]) * c;
            }
            out[n - 1] = (3.0 * src[n - 1] - 4.0 * src[n - 2] + src[n - 3]) * c;
        }
        2 => {
            let c = 1.0 / (h * h);
            out[0] = (2.0 * src[0] - 5.0 * src[1] + 4.0 * src[2] - src[3]) * c;
            for i in 1..n - 1 {
                out[i] = (src[i + 1] - 2.0 * src[i] + src[i - 1]) * c;
            }
            out[n - 1] = (2.0 * src[n - 1] - 5.0 * src[n - 2] + 4.0 * src[n - 3] - src[n - 4]) * c;
        }
        _ => unreachable!("orders above 2 are rejected by the budget check"),
    }
}

/// `∂^σ` of a sampled field by finite differences, axis by axis.
pub fn fd_derivative(values: &[f64], carrier: &Carrier, sigma: &MultiIndex) -> Result<Vec<f64>> {
    if sigma.dim() != carrier.axes.len() {
        return Err(Error::GridMismatch(format!("multi-index of length {} on a {}-axis carrier", sigma.dim(), carrier.axes.len())));
    }
    check_budget(sigma, DERIVATIVE_BUDGET)?;
    let strides = carrier.strides();
    let mut cur = values.to_vec();
    for (d, &order) in sigma.components.iter().enumerate() {
        if order == 0 {
            continue;
        }
        let Axis { step, len, .. } = carrier.axes[d];
        if len < order + 2 {
            return Err(Error::GridMismatch(format!("axis {d} has {len} nodes, too few for a derivative of order {order}")));
        }
        let stride = strides[d];
        let block = stride * len;
        let mut next = vec![0.0; cur.len()];
        let mut line = vec![0.0; len];
        let mut dline = vec![0.0; len];
        for base in (0..cur.len()).step_by(block) {
            for off in 0..stride {
                for i in 0..len {
                    line[i] = cur[base + off + i * stride];
                }
                diff_line(&line, step, order, &mut dline);
                for i in 0..len {
                    next[base + off + i * stride] = dline[i];
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// `‖f‖_σ`: cellwise sup of `|∂^σ f|` over the carrier.
pub fn seminorm(f: &FieldNet, sigma: &MultiIndex) -> Result<ScalarNet> {
    let values: Result<Vec<f64>> = f.cells.par_iter().map(|c| fd_derivative(c, &f.carrier, sigma).map(|d| sup_abs(&d))).collect();
    ScalarNet::new(f.grids.clone(), values?)
}

/// The neighborhood `W_{σ,r}` of zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSpec {
    pub sigma: MultiIndex,
    pub r: f64,
}

impl NeighborhoodSpec {
    pub fn new(sigma: MultiIndex, r: f64) -> Self {
        NeighborhoodSpec { sigma, r }
    }
}

/// `f ∈ W_{σ,r}`: `‖f‖_κ ≤ α_r` for every `κ ≤ σ`, with `α_r` the scale
/// element native to the carrier of `f`.
pub fn in_w(f: &FieldNet, spec: &NeighborhoodSpec, test: &OrderTest) -> Result<bool> {
    let target = native_scale_element(spec.r, &f.carrier, &f.grids);
    for kappa in spec.sigma.below() {
        if !net_leq(&seminorm(f, &kappa)?, &target, test)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x ∈ V_r`: `|x| ≤ α_r`.
pub fn in_v(x: &ScalarNet, r: f64, test: &OrderTest) -> Result<bool> {
    net_leq(&x.abs(), &scale_element(r, &x.grids), test)
}

/// The boundary neighborhood `N_{ν,s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySeminormSpec {
    pub nu: usize,
    pub s: f64,
}

/// `p_(ν)(u)`: sup over both boundary trajectories of `|∂_t^ν u|`.
pub fn boundary_seminorm(u: &FieldNet, nu: usize) -> Result<ScalarNet> {
    if u.carrier.kind != CarrierKind::Boundary {
        return Err(Error::GridMismatch("boundary seminorms need a boundary carrier".into()));
    }
    seminorm(u, &MultiIndex::new(vec![0, nu]))
}

/// `u ∈ N_{ν,s}`: `p_(l)(u) ≤ α_s` for every `l ≤ ν`.
pub fn in_n(u: &FieldNet, spec: &BoundarySeminormSpec, test: &OrderTest) -> Result<bool> {
    let target = native_scale_element(spec.s, &u.carrier, &u.grids);
    for l in 0..=spec.nu {
        if !net_leq(&boundary_seminorm(u, l)?, &target, test)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Telescoped value of one cell of the Cauchy limit.
///
/// `member(n)` returns the sequence element `f_n` (1-based) at this cell.
/// The difference `f_{ν_{i+1}} − f_{ν_i}` is added when `q ≥ ν_i` and
/// `ε < 1/ν_i`.
pub fn telescope_cell<'a, F>(q: usize, eps: f64, schedule: &[usize], member: F) -> Vec<f64>
where
    F: Fn(usize) -> &'a [f64],
{
    let mut acc = member(schedule[0]).to_vec();
    for w in schedule.windows(2) {
        let nu = w[0];
        if q >= nu && eps < 1.0 / nu as f64 {
            let (hi, lo) = (member(w[1]), member(nu));
            for ((a, x), y) in acc.iter_mut().zip(hi).zip(lo) {
                *a += x - y;
            }
        }
    }
    acc
}

/// Validates a `ν` schedule against a sequence of `len` elements.
pub fn check_schedule(schedule: &[usize], len: usize) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ScheduleNotIncreasing(schedule.to_vec()));
    }
    if *schedule.last().unwrap() > len {
        return Err(Error::InvalidParameter(format!("schedule reaches {} but the sequence has {len} elements", schedule.last().unwrap())));
    }
    Ok(())
}

/// Assembles `f = f_{ν_1} + Σ_i 1_{A_{ν_i} × I_{1/ν_i}} (f_{ν_{i+1}} − f_{ν_i})`
/// from a sequence `f_1, f_2, …` (index 0 of `sequence` is `f_1`).
pub fn cauchy_limit(sequence: &[FieldNet], schedule: &[usize]) -> Result<FieldNet> {
    check_schedule(schedule, sequence.len())?;
    let first = &sequence[0];
    for f in &sequence[1..] {
        first.grids.check_same(&f.grids)?;
        if !first.carrier.same_sampling(&f.carrier) {
            return Err(Error::GridMismatch("sequence elements live on different carriers".into()));
        }
    }
    let grids = &first.grids;
    let cells: Vec<Vec<f64>> = (0..grids.n_cells())
        .into_par_iter()
        .map(|c| {
            let (qi, ei) = grids.split(c);
            telescope_cell(grids.orders.q_values[qi], grids.eps.eps_values[ei], schedule, |n| &sequence[n - 1].cells[c])
        })
        .collect();
    FieldNet::new(grids.clone(), first.carrier.clone(), cells)
}

/// Result of checking `(f − f_{ν_{t+1}}) ∈ W_{λ,p}` along the schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyConvergence {
    /// `member[t − 1]` is the membership at `t = 1, 2, …`.
    pub member: Vec<bool>,
    /// Smallest `θ` such that membership holds for every checked `t ≥ θ`.
    pub theta: Option<usize>,
}

/// Checks `(limit − f_{ν_{t+1}}) ∈ W_{λ,p}` for `t = 1..len(schedule) − 1`.
///
/// Orders `q < ν_{t+1}` are outside `A_{ν_{t+1}}` and are not examined.
pub fn cauchy_convergence(
    limit: &FieldNet,
    sequence: &[FieldNet],
    schedule: &[usize],
    target: &NeighborhoodSpec,
    test: &OrderTest,
) -> Result<CauchyConvergence> {
    check_schedule(schedule, sequence.len())?;
    let mut member = Vec::with_capacity(schedule.len() - 1);
    for t in 1..schedule.len() {
        let nu = schedule[t];
        let diff = limit.sub(&sequence[nu - 1])?;
        let t_test = OrderTest { min_order: test.min_order.max(nu), ..*test };
        member.push(in_w(&diff, target, &t_test)?);
    }
    let theta = match member.iter().rposition(|&m| !m) {
        None => Some(1),
        Some(k) if k + 1 < member.len() => Some(k + 2),
        Some(_) => None,
    };
    Ok(CauchyConvergence { member, theta })
}

/// Axioms checked by [`check_filter_axioms`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `W_{σ,s} + W_{σ,s} ⊂ W_{σ,r}`.
    Sum,
    /// `W_{σ,r} · W_{σ,r} ⊂ W_{σ,r}`.
    Product,
    /// `g · W_{σ,N+r+1} ⊂ W_{σ,r}` for `‖g‖_κ ≤ c·α_{−N}`.
    Absorption,
}

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Sum => "sum",
            Axiom::Product => "product",
            Axiom::Absorption => "absorption",
        }
    }
}

/// Parameters of the randomized filter-axiom suites.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterAxiomConfig {
    pub sigma: MultiIndex,
    pub r: f64,
    /// Exponent of the summand neighborhood; sums need `s > r`.
    pub s_sum: f64,
    /// Growth order `N` of the absorbing factor.
    pub absorb_n: f64,
    pub trials: usize,
    pub seed: u64,
    pub test: OrderTest,
}

impl Default for FilterAxiomConfig {
    fn default() -> Self {
        FilterAxiomConfig { sigma: MultiIndex::new(vec![1]), r: 1.0, s_sum: 1.1, absorb_n: 2.0, trials: 100, seed: 7, test: OrderTest::default() }
    }
}

/// Random power-law fields `c·(i_q ε)^e·h(x)` with trigonometric `h`.
#[derive(Debug, Clone)]
pub struct PowerLawGenerator {
    pub grids: NetGrids,
    pub carrier: Carrier,
    rng: ChaCha8Rng,
}

impl PowerLawGenerator {
    pub fn new(grids: NetGrids, carrier: Carrier, seed: u64) -> Self {
        PowerLawGenerator { grids, carrier, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A field `c·(i_q ε)^e·h` with `h` a random sum of three trigonometric
    /// modes over the carrier's coordinates.
    pub fn field(&mut self, exponent: f64, coeff: f64) -> Result<FieldNet> {
        let dims = self.carrier.axes.len();
        let spans: Vec<f64> = self.carrier.axes.iter().map(|a| (a.end() - a.start).abs().max(1e-12)).collect();
        let starts: Vec<f64> = self.carrier.axes.iter().map(|a| a.start).collect();
        let modes: Vec<(f64, Vec<f64>, f64)> = (0..3)
            .map(|_| {
                let amp = self.rng.random_range(0.2..1.0);
                let freq = (0..dims).map(|_| self.rng.random_range(0.5..3.0)).collect();
                let phase = self.rng.random_range(0.0..std::f64::consts::TAU);
                (amp, freq, phase)
            })
            .collect();
        FieldNet::separable(
            &self.grids,
            &self.carrier,
            |_, eps, iq| coeff * (iq * eps).powf(exponent),
            |p| {
                modes
                    .iter()
                    .map(|(amp, freq, phase)| {
                        let arg: f64 = (0..dims).map(|d| freq[d] * std::f64::consts::PI * (p[d] - starts[d]) / spans[d]).sum();
                        amp * (arg + phase).sin()
                    })
                    .sum()
            },
        )
    }

    /// A random member of `W_{σ,s}`: native exponent drawn from
    /// `[s + 0.1, s + 1.5]`, coefficient from `[0.1, 10]`.
    pub fn member(&mut self, s: f64) -> Result<FieldNet> {
        let native = self.carrier.native_scale_exponent(1.0);
        let e = self.rng.random_range(s + 0.1..s + 1.5) * native;
        let c = self.rng.random_range(0.1..10.0);
        self.field(e, c)
    }

    /// A factor with `‖g‖_κ ≤ c·α_{−N}`: exactly order `−N` with a random
    /// coefficient.
    pub fn moderate_factor(&mut self, n: f64) -> Result<FieldNet> {
        let native = self.carrier.native_scale_exponent(1.0);
        let c = self.rng.random_range(0.1..10.0);
        self.field(-n * native, c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomTrial {
    pub axiom: Axiom,
    pub trial: usize,
    pub pass: bool,
    pub counterexample_id: Option<String>,
}

/// Outcome of the randomized filter-axiom suites.
#[derive(Debug, Clone, Default)]
pub struct FilterAxiomReport {
    pub trials: Vec<AxiomTrial>,
    /// Operand nets of every failing trial, keyed by counterexample id.
    pub counterexamples: Vec<(String, Vec<FieldNet>)>,
}

impl FilterAxiomReport {
    /// `(passed, total)` for one axiom.
    pub fn counts(&self, axiom: Axiom) -> (usize, usize) {
        let rows = self.trials.iter().filter(|t| t.axiom == axiom);
        let total = rows.clone().count();
        (rows.filter(|t| t.pass).count(), total)
    }

    pub fn all_pass(&self) -> bool {
        self.trials.iter().all(|t| t.pass)
    }
}

/// Runs the sum, product and absorption suites on random power-law members
/// drawn by `gen`.
pub fn check_filter_axioms(gen: &mut PowerLawGenerator, cfg: &FilterAxiomConfig) -> Result<FilterAxiomReport> {
    let mut report = FilterAxiomReport::default();
    let target = NeighborhoodSpec::new(cfg.sigma.clone(), cfg.r);
    let absorb_s = cfg.absorb_n + cfg.r + 1.0;
    for axiom in [Axiom::Sum, Axiom::Product, Axiom::Absorption] {
        for trial in 0..cfg.trials {
            let operands = match axiom {
                Axiom::Sum => vec![gen.member(cfg.s_sum)?, gen.member(cfg.s_sum)?],
                Axiom::Product => vec![gen.member(cfg.r)?, gen.member(cfg.r)?],
                Axiom::Absorption => vec![gen.moderate_factor(cfg.absorb_n)?, gen.member(absorb_s)?],
            };
            let combined = match axiom {
                Axiom::Sum => operands[0].add(&operands[1])?,
                Axiom::Product | Axiom::Absorption => operands[0].mul(&operands[1])?,
            };
            let pass = in_w(&combined, &target, &cfg.test)?;
            let counterexample_id = if pass {
                None
            } else {
                let id = format!("{}-{trial}", axiom.name());
                report.counterexamples.push((id.clone(), operands));
                Some(id)
            };
            report.trials.push(AxiomTrial { axiom, trial, pass, counterexample_id });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{DomainSpec, SpaceTimeGrid};
    use crate::nets::{EpsilonGrid, OrderGrid, sample_on};
    use std::f64::consts::PI;

    fn unit(nx: usize) -> Carrier {
        DomainSpec::unit(nx).unwrap().carrier()
    }

    #[test]
    fn multi_index_below() {
        let s = MultiIndex::new(vec![1, 2]);
        let b = s.below();
        assert_eq!(b.len(), 6);
        assert!(b.iter().all(|k| k.leq(&s)));
        assert_eq!(MultiIndex::diagonal(2, 3).components, vec![2, 2, 2]);
        assert_eq!(multi_binomial(&MultiIndex::new(vec![2, 2]), &MultiIndex::new(vec![1, 1])), 4);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn sine_seminorms() {
        let grids = NetGrids::default();
        let c = unit(401);
        let f = FieldNet::separable(&grids, &c, |_, e, _| 1.0 / e, |p| (PI * p[0]).sin()).unwrap();
        let s0 = seminorm(&f, &MultiIndex::new(vec![0])).unwrap();
        let s1 = seminorm(&f, &MultiIndex::new(vec![1])).unwrap();
        for (ei, &e) in grids.eps.eps_values.iter().enumerate() {
            assert!((s0.get(0, ei) * e - 1.0).abs() < 1e-12);
            assert!((s1.get(0, ei) * e - PI).abs() < 1e-3);
        }
        assert!(matches!(seminorm(&f, &MultiIndex::new(vec![3])), Err(Error::DerivativeBudget { .. })));
    }

    #[test]
    fn second_derivative_is_second_order_at_edges() {
        let c = unit(101);
        let v = sample_on(&c, |p| p[0].powi(3));
        let d = fd_derivative(&v, &c, &MultiIndex::new(vec![2])).unwrap();
        // Cubics are differentiated exactly by the interior and one-sided stencils.
        for (i, x) in c.axes[0].nodes().iter().enumerate() {
            assert!((d[i] - 6.0 * x).abs() < 1e-8, "{i}");
        }
    }

    #[test]
    fn mixed_derivative_on_space_time() {
        let g = SpaceTimeGrid::new(DomainSpec::unit(41).unwrap(), 1.0, 41).unwrap();
        let c = g.carrier();
        let v = sample_on(&c, |p| p[0] * p[0] * p[1]);
        let d = fd_derivative(&v, &c, &MultiIndex::new(vec![1, 1])).unwrap();
        let nodes = sample_on(&c, |p| 2.0 * p[0]);
        for (a, b) in d.iter().zip(&nodes) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn membership_examples() {
        let grids = NetGrids::default();
        let c = unit(201);
        let t = OrderTest::default();
        let s0 = NeighborhoodSpec::new(MultiIndex::new(vec![0]), 1.0);
        let f = FieldNet::separable(&grids, &c, |_, e, _| 5.0 * e * e, |_| 1.0).unwrap();
        assert!(in_w(&f, &s0, &t).unwrap());
        let f = FieldNet::separable(&grids, &c, |_, e, _| e.sqrt(), |_| 1.0).unwrap();
        assert!(!in_w(&f, &s0, &t).unwrap());
        let f = FieldNet::separable(&grids, &c, |_, e, iq| (iq * e).powf(2.5), |p| (PI * p[0]).sin()).unwrap();
        assert!(in_w(&f, &NeighborhoodSpec::new(MultiIndex::new(vec![1]), 2.0), &t).unwrap());
        assert!(in_v(&scale_element(3.0, &grids), 2.0, &t).unwrap());
        assert!(!in_v(&scale_element(1.0, &grids), 2.0, &t).unwrap());
        assert!(in_v(&scale_element(2.1, &grids).scale(7.0).unwrap(), 2.0, &t).unwrap());
    }

    #[test]
    fn boundary_seminorm_examples() {
        let grids = NetGrids::default();
        let g = SpaceTimeGrid::new(DomainSpec::unit(32).unwrap(), 1.0, 65).unwrap();
        let bc = g.boundary_carrier();
        let z = FieldNet::zeros(&grids, &bc);
        assert!(boundary_seminorm(&z, 0).unwrap().values.iter().all(|&v| v == 0.0));
        let lin = FieldNet::separable(&grids, &bc, |_, e, _| e, |p| p[1]).unwrap();
        let p1 = boundary_seminorm(&lin, 1).unwrap();
        for (ei, &e) in grids.eps.eps_values.iter().enumerate() {
            assert!((p1.get(3, ei) - e).abs() < 1e-12 * e.max(1.0));
        }
        let s = FieldNet::separable(&grids, &bc, |_, e, _| e * e, |p| p[1].sin()).unwrap();
        let p0 = boundary_seminorm(&s, 0).unwrap();
        assert!((p0.get(0, 0) - 0.125f64.powi(2) * 1f64.sin()).abs() < 1e-15);
        assert!(boundary_seminorm(&FieldNet::zeros(&grids, &g.carrier()), 0).is_err());
    }

    #[test]
    fn cauchy_limit_indicator_logic() {
        let grids = NetGrids::new(OrderGrid::up_to(2), EpsilonGrid::new(vec![1.0, 0.75, 0.25], 2).unwrap(), vec![2.0; 3]).unwrap();
        let c = unit(16);
        let f1 = FieldNet::separable(&grids, &c, |_, _, _| 1.0, |_| 1.0).unwrap();
        let f2 = FieldNet::separable(&grids, &c, |_, _, _| 2.0, |_| 1.0).unwrap();
        let lim = cauchy_limit(&[f1.clone(), f2.clone()], &[1, 2]).unwrap();
        for qi in 0..3 {
            for (ei, &e) in grids.eps.eps_values.iter().enumerate() {
                let expect = if qi >= 1 && e < 1.0 { 2.0 } else { 1.0 };
                assert_eq!(lim.cell(qi, ei)[0], expect);
            }
        }
        let same = cauchy_limit(&[f1.clone(), f1.clone(), f1.clone()], &[1, 2, 3]).unwrap();
        assert_eq!(same, f1);
        assert!(matches!(cauchy_limit(&[f1.clone(), f2], &[2, 1]), Err(Error::ScheduleNotIncreasing(_))));
    }

    #[test]
    fn sums_need_s_above_r() {
        let grids = NetGrids::default();
        let mut gen = PowerLawGenerator::new(grids, unit(129), 3);
        let cfg = FilterAxiomConfig { s_sum: 0.6, trials: 20, ..FilterAxiomConfig::default() };
        let rep = check_filter_axioms(&mut gen, &cfg).unwrap();
        let (pass, total) = rep.counts(Axiom::Sum);
        assert!(pass < total, "s = r/2 + 0.1 cannot close sums under the order");
    }
}
