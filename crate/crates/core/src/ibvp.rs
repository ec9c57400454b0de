//! The generalized IBVP `u_t − Δu + u³ = 0` in `G(Q)`, `u = u₀` at `t = 0`,
//! `u = 0` on `∂Ω × [0, T]`, solved one `(q, ε)` cell at a time.

use rayon::prelude::*;

use crate::domains::{build_cutoff_with, cutoff_profile, exhaustion, restrict, trace_boundary, trace_time, window_carrier, MIN_GAP_CELLS};
use crate::error::{Error, Result};
use crate::grid::{Carrier, CarrierKind, DomainSpec, SpaceTimeGrid};
use crate::mollifier::{build_mollifier, bump, mollify, InitialDatum, MollifierProfile, MollifierSpec};
use crate::nets::{fit_exponent, is_moderate, is_negligible, native_scale_element, net_leq, EpsilonGrid, ExponentFit, FieldNet, NegligibilityPolicy, NetGrids, OrderGrid, OrderTest, ScalarNet, Verdict};
use crate::solver::{solve_difference, solve_semilinear, SolverConfig};
use crate::topology::{fd_derivative, seminorm, telescope_cell, MultiIndex, NeighborhoodSpec};

/// Initial data of the generalized problem.
#[derive(Debug, Clone)]
pub enum GeneralizedInitialDatum {
    /// A distribution regularized by the canonical profile of each order.
    Distribution(InitialDatum),
    /// An explicit net of fields on `Ω̄`.
    Custom(FieldNet),
}

impl From<InitialDatum> for GeneralizedInitialDatum {
    fn from(d: InitialDatum) -> Self {
        GeneralizedInitialDatum::Distribution(d)
    }
}

/// Grids, solver settings and verdict thresholds of an IBVP run.
#[derive(Debug, Clone)]
pub struct IbvpConfig {
    pub grid: SpaceTimeGrid,
    pub orders: OrderGrid,
    pub eps: EpsilonGrid,
    pub solver: SolverConfig,
    /// Seminorms certified on `Q̄`.
    pub sigmas: Vec<MultiIndex>,
    pub policy: NegligibilityPolicy,
    /// Index `ν` of the interior window `Ω̄_ν` used for trace residuals.
    pub trace_window: usize,
}

impl Default for IbvpConfig {
    /// `Ω = (0, 1)` on 201 nodes, `T = 0.1` with 201 stored rows and 10
    /// steps per row (`dt = 5·10⁻⁵`), `q = 0..6`, `ε = 2^{−3}..2^{−12}`.
    fn default() -> Self {
        IbvpConfig {
            grid: SpaceTimeGrid { domain: DomainSpec { a: 0.0, b: 1.0, nx: 201 }, t_final: 0.1, nt: 201 },
            orders: OrderGrid::default(),
            eps: EpsilonGrid::default(),
            solver: SolverConfig { substeps: 10, ..SolverConfig::default() },
            sigmas: ibvp_sigmas(),
            policy: NegligibilityPolicy::default(),
            trace_window: 1,
        }
    }
}

/// `σ ∈ {(0,0), (1,0), (0,1), (2,0)}` on `Q̄`.
pub fn ibvp_sigmas() -> Vec<MultiIndex> {
    vec![MultiIndex::new(vec![0, 0]), MultiIndex::new(vec![1, 0]), MultiIndex::new(vec![0, 1]), MultiIndex::new(vec![2, 0])]
}

impl IbvpConfig {
    pub fn step_dt(&self) -> f64 {
        self.solver.dt(&self.grid)
    }
}

/// The canonical profile of every order in `orders`.
pub fn build_profiles(orders: &OrderGrid) -> Result<Vec<MollifierProfile>> {
    orders.q_values.iter().map(|&q| build_mollifier(MollifierSpec::with_order(q))).collect()
}

/// The `(q, ε)` lattice with the support diameters of `profiles`.
pub fn net_grids(orders: &OrderGrid, eps: &EpsilonGrid, profiles: &[MollifierProfile]) -> Result<NetGrids> {
    NetGrids::new(orders.clone(), eps.clone(), profiles.iter().map(|p| p.support_diameter()).collect())
}

/// Regularized initial data `û₀(q, ε)` on `Ω̄`.
pub fn initial_net(u0: &GeneralizedInitialDatum, domain: &DomainSpec, grids: &NetGrids, profiles: &[MollifierProfile]) -> Result<FieldNet> {
    match u0 {
        GeneralizedInitialDatum::Custom(net) => {
            grids.check_same(&net.grids)?;
            if !net.carrier.same_sampling(&domain.carrier()) {
                return Err(Error::GridMismatch("custom datum is not sampled on the spatial grid".into()));
            }
            Ok(net.clone())
        }
        GeneralizedInitialDatum::Distribution(d) => {
            let cells: Result<Vec<Vec<f64>>> = (0..grids.n_cells())
                .into_par_iter()
                .map(|c| {
                    let (qi, ei) = grids.split(c);
                    mollify(d, &profiles[qi], grids.eps.eps_values[ei], domain)
                })
                .collect();
            FieldNet::new(grids.clone(), domain.carrier(), cells?)
        }
    }
}

/// Per-cell diagnostics of the classical solves.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRun {
    pub q: usize,
    pub eps: f64,
    pub datum_sup: f64,
    pub projected_boundary: f64,
    /// `‖uⁿ‖_∞` after every time step.
    pub step_sups: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct IbvpResult {
    pub config: IbvpConfig,
    pub grids: NetGrids,
    pub initial: FieldNet,
    pub solution: FieldNet,
    pub cells: Vec<CellRun>,
    /// Cells whose solve failed; their solution fields are zero.
    pub failures: Vec<(usize, Error)>,
    pub seminorm_nets: Vec<(MultiIndex, ScalarNet)>,
    pub moderate_verdicts: Vec<(MultiIndex, Verdict)>,
    /// `‖u(·, 0) − û₀‖` over `Ω̄`.
    pub initial_trace_residual: ScalarNet,
    /// The same residual over the window `Ω̄_ν`.
    pub interior_trace_residual: ScalarNet,
    /// `p_(0)` of the boundary trace.
    pub boundary_trace_residual: ScalarNet,
}

impl IbvpResult {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn seminorm(&self, sigma: &MultiIndex) -> Option<&ScalarNet> {
        self.seminorm_nets.iter().find(|(s, _)| s == sigma).map(|(_, n)| n)
    }

    pub fn verdict(&self, sigma: &MultiIndex) -> Option<&Verdict> {
        self.moderate_verdicts.iter().find(|(s, _)| s == sigma).map(|(_, v)| v)
    }
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

fn step_violations(step_sups: &[f64]) -> usize {
    step_sups.windows(2).filter(|w| w[1] > w[0] + MAX_PRINCIPLE_SLACK).count()
}

/// Solves every cell of the lattice and certifies the solution net.
pub fn solve_generalized(u0: &GeneralizedInitialDatum, cfg: &IbvpConfig) -> Result<IbvpResult> {
    let profiles = build_profiles(&cfg.orders)?;
    let grids = net_grids(&cfg.orders, &cfg.eps, &profiles)?;
    let initial = initial_net(u0, &cfg.grid.domain, &grids, &profiles)?;
    let n = cfg.grid.domain.nx * cfg.grid.nt;
    let runs: Vec<std::result::Result<(Vec<f64>, CellRun), (Error, CellRun)>> = (0..grids.n_cells())
        .into_par_iter()
        .map(|c| {
            let (qi, ei) = grids.split(c);
            let g = &initial.cells[c];
            let meta = CellRun { q: grids.orders.q_values[qi], eps: grids.eps.eps_values[ei], datum_sup: sup_abs(g), projected_boundary: 0.0, step_sups: vec![] };
            match solve_semilinear(g, &cfg.grid, &cfg.solver) {
                Ok(u) => Ok((u.values, CellRun { projected_boundary: u.projected_boundary, step_sups: u.step_sups, ..meta })),
                Err(e) => Err((e, meta)),
            }
        })
        .collect();
    let mut cells = Vec::with_capacity(runs.len());
    let mut values = Vec::with_capacity(runs.len());
    let mut failures = Vec::new();
    for (c, r) in runs.into_iter().enumerate() {
        match r {
            Ok((v, meta)) => {
                values.push(v);
                cells.push(meta);
            }
            Err((e, meta)) => {
                values.push(vec![0.0; n]);
                cells.push(meta);
                failures.push((c, e));
            }
        }
    }
    let solution = FieldNet::new(grids.clone(), cfg.grid.carrier(), values)?;
    let mut seminorm_nets = Vec::new();
    let mut moderate_verdicts = Vec::new();
    for sigma in &cfg.sigmas {
        let net = seminorm(&solution, sigma)?;
        moderate_verdicts.push((sigma.clone(), is_moderate(&net, &cfg.policy)));
        seminorm_nets.push((sigma.clone(), net));
    }
    let trace0 = trace_time(&solution, 0.0)?.net;
    let residual = trace0.sub(&initial)?;
    let initial_trace_residual = residual.sup_norm();
    let interior_trace_residual = restrict(&residual, &window_carrier(&cfg.grid.domain, cfg.trace_window)?)?.sup_norm();
    let boundary_trace_residual = trace_boundary(&solution)?.sup_norm();
    Ok(IbvpResult {
        config: cfg.clone(),
        grids,
        initial,
        solution,
        cells,
        failures,
        seminorm_nets,
        moderate_verdicts,
        initial_trace_residual,
        interior_trace_residual,
        boundary_trace_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `‖u‖_{Q̄} ≤ ‖û₀‖_{Ω̄}`.
    K0Bound,
    /// `‖uⁿ⁺¹‖_∞ ≤ ‖uⁿ‖_∞`.
    StepMonotonicity,
    /// `‖u(·, t)‖_∞ ≤ 1.05/√(2t)` for `t ≥ 5·dt`.
    Smoothing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriViolation {
    pub q: usize,
    pub eps: f64,
    pub kind: ViolationKind,
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AprioriReport {
    pub violations: Vec<AprioriViolation>,
    pub cells_checked: usize,
    pub steps_checked: usize,
    /// Largest `‖u(·, t)‖_∞ · √(2t)` seen over the smoothing range.
    pub max_smoothing_ratio: f64,
}

/// Absolute slack for the discrete maximum principle.
pub const MAX_PRINCIPLE_SLACK: f64 = 1e-12;
/// Relative slack of the smoothing bound `1/√(2t)`.
pub const SMOOTHING_SLACK: f64 = 0.05;

/// Checks the `k = 0` a priori bound, step monotonicity and the smoothing
/// bound on every cell of `result`.
pub fn verify_apriori(result: &IbvpResult) -> AprioriReport {
    let mut rep = AprioriReport::default();
    for (c, cell) in result.cells.iter().enumerate() {
        if cell.step_sups.is_empty() {
            continue;
        }
        rep.cells_checked += 1;
        let dt = result.config.step_dt();
        let sol_sup = sup_abs(&result.solution.cells[c]);
        if sol_sup > cell.datum_sup + MAX_PRINCIPLE_SLACK {
            rep.violations.push(AprioriViolation { q: cell.q, eps: cell.eps, kind: ViolationKind::K0Bound, t: 0.0, value: sol_sup, bound: cell.datum_sup });
        }
        for (n, w) in cell.step_sups.windows(2).enumerate() {
            rep.steps_checked += 1;
            let t = (n + 1) as f64 * dt;
            if w[1] > w[0] + MAX_PRINCIPLE_SLACK {
                rep.violations.push(AprioriViolation { q: cell.q, eps: cell.eps, kind: ViolationKind::StepMonotonicity, t, value: w[1], bound: w[0] });
            }
            if t >= 5.0 * dt * (1.0 - 1e-12) {
                let bound = (1.0 + SMOOTHING_SLACK) / (2.0 * t).sqrt();
                rep.max_smoothing_ratio = rep.max_smoothing_ratio.max(w[1] * (2.0 * t).sqrt());
                if w[1] > bound {
                    rep.violations.push(AprioriViolation { q: cell.q, eps: cell.eps, kind: ViolationKind::Smoothing, t, value: w[1], bound });
                }
            }
        }
    }
    rep
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return f64::NAN;
    }
    cov / (vx * vy).sqrt()
}

/// Settings of the cutoff-sequence run.
#[derive(Debug, Clone)]
pub struct CutoffRunConfig {
    pub ibvp: IbvpConfig,
    /// Cutoff levels `p = 1..=p_max`.
    pub p_max: usize,
    pub targets: Vec<NeighborhoodSpec>,
    pub test: OrderTest,
    pub min_gap_cells: f64,
}

impl Default for CutoffRunConfig {
    /// `P = 7` on 1441 spatial nodes (eight cells across the last cutoff
    /// gap), 101 stored rows with 20 steps each, target `W_{(0,0),−1}`.
    fn default() -> Self {
        let mut ibvp = IbvpConfig::default();
        ibvp.grid = SpaceTimeGrid { domain: DomainSpec { a: 0.0, b: 1.0, nx: 1441 }, t_final: 0.1, nt: 101 };
        ibvp.solver.substeps = 20;
        CutoffRunConfig {
            ibvp,
            p_max: 7,
            targets: vec![NeighborhoodSpec::new(MultiIndex::new(vec![0, 0]), -1.0)],
            test: OrderTest::default(),
            min_gap_cells: MIN_GAP_CELLS,
        }
    }
}

/// Statistics of one pair `(p, q)` of cutoff solutions, `p < q`.
#[derive(Debug, Clone)]
pub struct PairReport {
    pub p: usize,
    pub q: usize,
    /// Seminorm nets of `u_p − u_q` for every `κ` below some target `σ`.
    pub seminorms: Vec<(MultiIndex, ScalarNet)>,
    pub fits: Vec<(MultiIndex, ExponentFit)>,
    /// Membership of `u_p − u_q` in each target neighborhood.
    pub memberships: Vec<bool>,
    /// Smallest nodal value of `a_pq = u_p² + u_q² + u_p u_q`.
    pub apq_min: f64,
    /// Largest `|a_pq − ((u_p + u_q/2)² + ¾u_q²)|` in units of
    /// `ε_mach·(u_p² + u_q² + |u_p u_q|)`.
    pub apq_identity_ulps: f64,
    /// Largest residual of `w_t − Δ_h w + a_pq w = 0` on stored rows with
    /// `t ≥ T/10` (central time difference), relative to the largest term.
    /// Earlier rows do not resolve the initial layer of the cutoff gaps.
    pub chain_residual: f64,
    pub identically_zero: bool,
}

impl PairReport {
    pub fn sup_net(&self) -> &ScalarNet {
        &self.seminorms[0].1
    }
}

/// Outcome of the cutoff-sequence run.
#[derive(Debug, Clone)]
pub struct CutoffReport {
    pub config: CutoffRunConfig,
    pub grids: NetGrids,
    pub pairs: Vec<PairReport>,
    /// Smallest `p₀` with `u_p − u_q ≡ 0` for all `p₀ ≤ p < q`.
    pub p0: Option<usize>,
    /// Per cell: consecutive-pair sups strictly decrease in `p`.
    pub consecutive_decreasing: Vec<bool>,
    /// Per cell: Spearman correlation of all pair sups against `−min(p, q)`.
    pub spearman: Vec<f64>,
    /// Per target: memberships never switch from true to false as
    /// `min(p, q)` grows.
    pub membership_monotone: Vec<bool>,
    /// Regularized datum `û₀` on `Ω̄`.
    pub datum: FieldNet,
    /// Cauchy limit (schedule `ν_i = i`) at `t = 0`.
    pub limit_initial: FieldNet,
    /// Cauchy limit on `∂Ω × [0, T]`.
    pub limit_boundary: FieldNet,
    /// Per cell: `sup |limit − u_P|` over `Q̄`.
    pub limit_minus_last: ScalarNet,
    /// Steps of any cutoff solve at which `‖uⁿ‖_∞` grew by more than
    /// [`MAX_PRINCIPLE_SLACK`].
    pub max_principle_violations: usize,
}

impl CutoffReport {
    /// The sup-norm trend required before assembling the limit.
    pub fn trend_ok(&self) -> bool {
        self.p0.is_some() || (self.consecutive_decreasing.iter().all(|&b| b) && self.spearman.iter().all(|&s| s >= 0.9))
    }

    pub fn spearman_min(&self) -> f64 {
        self.spearman.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

struct CellPairStats {
    seminorms: Vec<f64>,
    apq_min: f64,
    apq_ulps: f64,
    chain: f64,
    zero: bool,
}

/// Solves `u_p` for `u_{0p} = χ_p·u₀`, `p = 1..=P`, and compares all pairs.
pub fn cutoff_sequence_run(u0: &GeneralizedInitialDatum, cfg: &CutoffRunConfig) -> Result<CutoffReport> {
    let ib = &cfg.ibvp;
    if cfg.p_max < 4 {
        return Err(Error::InvalidParameter(format!("the cutoff run needs P ≥ 4, got {}", cfg.p_max)));
    }
    let domain = ib.grid.domain;
    let profiles = build_profiles(&ib.orders)?;
    let grids = net_grids(&ib.orders, &ib.eps, &profiles)?;
    let datum = initial_net(u0, &domain, &grids, &profiles)?;
    let cprof = cutoff_profile()?;
    let cutoffs = (1..=cfg.p_max).map(|p| build_cutoff_with(&domain, p, cfg.min_gap_cells, &cprof).map(|c| c.field)).collect::<Result<Vec<_>>>()?;

    let mut kappas: Vec<MultiIndex> = vec![MultiIndex::new(vec![0, 0])];
    for t in &cfg.targets {
        for k in t.sigma.below() {
            if !kappas.contains(&k) {
                kappas.push(k);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (1..=cfg.p_max).flat_map(|p| (p + 1..=cfg.p_max).map(move |q| (p, q))).collect();
    let carrier = ib.grid.carrier();
    let nx = domain.nx;
    let nt = ib.grid.nt;
    let h = domain.h();
    let row_dt = ib.grid.dt();
    let schedule: Vec<usize> = (1..=cfg.p_max).collect();
    let chain_from = (nt / 10).max(1);

    type CellOut = (Vec<CellPairStats>, Vec<f64>, Vec<f64>, f64, usize);
    let per_cell: Vec<Result<CellOut>> = (0..grids.n_cells())
        .into_par_iter()
        .map(|c| -> Result<CellOut> {
            let (qi, ei) = grids.split(c);
            let base = &datum.cells[c];
            let sols = cutoffs
                .iter()
                .map(|chi| {
                    let g: Vec<f64> = base.iter().zip(chi).map(|(a, b)| a * b).collect();
                    solve_semilinear(&g, &ib.grid, &ib.solver).map(|u| (step_violations(&u.step_sups), u.values))
                })
                .collect::<Result<Vec<_>>>()?;
            let violations: usize = sols.iter().map(|s| s.0).sum();
            let sols: Vec<Vec<f64>> = sols.into_iter().map(|s| s.1).collect();
            let mut stats = Vec::with_capacity(pairs.len());
            for &(p, q) in &pairs {
                let (up, uq) = (&sols[p - 1], &sols[q - 1]);
                let w: Vec<f64> = up.iter().zip(uq).map(|(a, b)| a - b).collect();
                let seminorms = kappas.iter().map(|k| fd_derivative(&w, &carrier, k).map(|d| sup_abs(&d))).collect::<Result<Vec<_>>>()?;
                let mut apq_min = f64::INFINITY;
                let mut apq_ulps = 0.0f64;
                for (&a, &b) in up.iter().zip(uq) {
                    let apq = a * a + b * b + a * b;
                    let sq = (a + 0.5 * b) * (a + 0.5 * b) + 0.75 * b * b;
                    apq_min = apq_min.min(apq);
                    let scale = a * a + b * b + (a * b).abs();
                    if scale > 0.0 {
                        apq_ulps = apq_ulps.max((apq - sq).abs() / (f64::EPSILON * scale));
                    }
                }
                let mut chain = 0.0f64;
                let mut scale = 0.0f64;
                for k in chain_from..nt - 1 {
                    for i in 1..nx - 1 {
                        let j = k * nx + i;
                        let wt = (w[j + nx] - w[j - nx]) / (2.0 * row_dt);
                        let lap = (w[j - 1] - 2.0 * w[j] + w[j + 1]) / (h * h);
                        let aw = (up[j] * up[j] + uq[j] * uq[j] + up[j] * uq[j]) * w[j];
                        chain = chain.max((wt - lap + aw).abs());
                        scale = scale.max(wt.abs()).max(lap.abs()).max(aw.abs());
                    }
                }
                let zero = w.iter().all(|&v| v == 0.0);
                stats.push(CellPairStats { seminorms, apq_min, apq_ulps, chain: if scale > 0.0 { chain / scale } else { chain }, zero });
            }
            let limit = telescope_cell(grids.orders.q_values[qi], grids.eps.eps_values[ei], &schedule, |n| &sols[n - 1]);
            let last = &sols[cfg.p_max - 1];
            let diff_last = limit.iter().zip(last).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let initial = limit[..nx].to_vec();
            let boundary: Vec<f64> = (0..nt).flat_map(|k| [limit[k * nx], limit[k * nx + nx - 1]]).collect();
            Ok((stats, initial, boundary, diff_last, violations))
        })
        .collect();
    let per_cell = per_cell.into_iter().collect::<Result<Vec<_>>>()?;

    let mut reports = Vec::with_capacity(pairs.len());
    for (pi, &(p, q)) in pairs.iter().enumerate() {
        let mut seminorms = Vec::with_capacity(kappas.len());
        for (ki, k) in kappas.iter().enumerate() {
            let vals = per_cell.iter().map(|c| c.0[pi].seminorms[ki]).collect();
            seminorms.push((k.clone(), ScalarNet::new(grids.clone(), vals)?));
        }
        let fits = seminorms.iter().map(|(k, n)| fit_exponent(n).map(|f| (k.clone(), f))).collect::<Result<Vec<_>>>()?;
        let mut memberships = Vec::with_capacity(cfg.targets.len());
        for t in &cfg.targets {
            let target = native_scale_element(t.r, &carrier, &grids);
            let mut ok = true;
            for k in t.sigma.below() {
                let net = &seminorms.iter().find(|(s, _)| *s == k).expect("every κ ≤ σ was computed").1;
                ok &= net_leq(net, &target, &cfg.test)?;
            }
            memberships.push(ok);
        }
        let fold = |f: &dyn Fn(&CellPairStats) -> f64, init: f64, op: fn(f64, f64) -> f64| per_cell.iter().map(|c| f(&c.0[pi])).fold(init, op);
        reports.push(PairReport {
            p,
            q,
            seminorms,
            fits,
            memberships,
            apq_min: fold(&|s| s.apq_min, f64::INFINITY, f64::min),
            apq_identity_ulps: fold(&|s| s.apq_ulps, 0.0, f64::max),
            chain_residual: fold(&|s| s.chain, 0.0, f64::max),
            identically_zero: per_cell.iter().all(|c| c.0[pi].zero),
        });
    }

    let p0 = (1..=cfg.p_max).find(|&p0| reports.iter().filter(|r| r.p >= p0).all(|r| r.identically_zero)).filter(|&p| p < cfg.p_max);
    let mut consecutive_decreasing = Vec::with_capacity(grids.n_cells());
    let mut spear = Vec::with_capacity(grids.n_cells());
    for c in 0..grids.n_cells() {
        let sups: Vec<f64> = reports.iter().map(|r| r.sup_net().values[c]).collect();
        let cons: Vec<f64> = reports.iter().zip(&sups).filter(|(r, _)| r.q == r.p + 1).map(|(_, &s)| s).collect();
        consecutive_decreasing.push(cons.windows(2).all(|w| w[1] < w[0]));
        let mins: Vec<f64> = reports.iter().map(|r| -(r.p.min(r.q) as f64)).collect();
        spear.push(spearman(&sups, &mins));
    }
    let membership_monotone = (0..cfg.targets.len())
        .map(|ti| {
            let mut by_min: Vec<(usize, bool)> = reports.iter().map(|r| (r.p, r.memberships[ti])).collect();
            by_min.sort_by_key(|&(m, _)| m);
            let first_true = by_min.iter().position(|&(_, b)| b);
            first_true.is_none_or(|k| by_min[k..].iter().all(|&(m, b)| b || m == by_min[k].0))
        })
        .collect();

    let limit_initial = FieldNet::new(grids.clone(), domain.carrier(), per_cell.iter().map(|c| c.1.clone()).collect())?;
    let limit_boundary = FieldNet::new(grids.clone(), ib.grid.boundary_carrier(), per_cell.iter().map(|c| c.2.clone()).collect())?;
    let limit_minus_last = ScalarNet::new(grids.clone(), per_cell.iter().map(|c| c.3).collect())?;
    let max_principle_violations = per_cell.iter().map(|c| c.4).sum();
    Ok(CutoffReport {
        config: cfg.clone(),
        grids,
        pairs: reports,
        p0,
        consecutive_decreasing,
        spearman: spear,
        membership_monotone,
        datum,
        limit_initial,
        limit_boundary,
        limit_minus_last,
        max_principle_violations,
    })
}

/// The assembled Cauchy limit, checked against the initial and boundary
/// conditions.
#[derive(Debug, Clone)]
pub struct LimitAssembly {
    pub initial_trace: FieldNet,
    pub boundary_trace: FieldNet,
    /// `sup_{Ω̄_ν} |limit(·, 0) − û₀|`.
    pub interior_residual: ScalarNet,
    pub interior_fit: ExponentFit,
    pub interior_verdict: Verdict,
    /// `sup_{Ω̄_ν} |û₀ − u₀|` where `u₀` has pointwise values, else `None`.
    pub datum_residual: Option<ScalarNet>,
    pub datum_fit: Option<ExponentFit>,
    pub boundary_sup: ScalarNet,
    pub boundary_zero: bool,
}

/// Assembles `lim u_p` with schedule `ν_i = i` from a completed cutoff run.
pub fn limit_assembly(report: &CutoffReport, u0: &GeneralizedInitialDatum) -> Result<LimitAssembly> {
    if !report.trend_ok() {
        return Err(Error::AssemblyRefused(format!(
            "cutoff differences do not decrease in min(p, q) (min Spearman {:.3})",
            report.spearman_min()
        )));
    }
    let ib = &report.config.ibvp;
    let domain = ib.grid.domain;
    let window = window_carrier(&domain, ib.trace_window)?;
    let residual = report.limit_initial.sub(&report.datum)?;
    let interior_residual = restrict(&residual, &window)?.sup_norm();
    let interior_fit = fit_exponent(&interior_residual)?;
    let interior_verdict = is_negligible(&interior_residual, &ib.policy);
    let (datum_residual, datum_fit) = match u0 {
        GeneralizedInitialDatum::Distribution(d) => {
            let cells: Option<Vec<Vec<f64>>> = (0..report.grids.n_cells())
                .map(|c| {
                    let (_, ei) = report.grids.split(c);
                    d.sample(report.grids.eps.eps_values[ei], &domain).map(|s| s.iter().zip(&report.datum.cells[c]).map(|(a, b)| b - a).collect())
                })
                .collect();
            match cells {
                Some(cells) => {
                    let net = FieldNet::new(report.grids.clone(), domain.carrier(), cells)?;
                    let r = restrict(&net, &window)?.sup_norm();
                    let f = fit_exponent(&r)?;
                    (Some(r), Some(f))
                }
                None => (None, None),
            }
        }
        GeneralizedInitialDatum::Custom(_) => (None, None),
    };
    let boundary_sup = report.limit_boundary.sup_norm();
    let boundary_zero = boundary_sup.values.iter().all(|&v| v == 0.0);
    Ok(LimitAssembly {
        initial_trace: report.limit_initial.clone(),
        boundary_trace: report.limit_boundary.clone(),
        interior_residual,
        interior_fit,
        interior_verdict,
        datum_residual,
        datum_fit,
        boundary_sup,
        boundary_zero,
    })
}

/// Settings of the uniqueness probe.
#[derive(Debug, Clone)]
pub struct UniquenessConfig {
    pub ibvp: IbvpConfig,
    pub q_list: Vec<usize>,
    /// The perturbation is `ε^{q + offset}·bump`; `None` gives `ε¹·bump`.
    pub offset: Option<i32>,
    /// Multiplier of the perturbation (0 for the zero perturbation).
    pub amplitude: f64,
}

impl Default for UniquenessConfig {
    fn default() -> Self {
        UniquenessConfig { ibvp: IbvpConfig::default(), q_list: (2..=6).collect(), offset: Some(3), amplitude: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    /// `sup_{Q̄} |u(û₀ + perturbation) − u(û₀)|` on the `q_list × ε` lattice.
    pub difference: ScalarNet,
    pub fit: ExponentFit,
    pub verdict: Verdict,
    pub identically_zero: bool,
    /// Steps of the unperturbed solves at which `‖uⁿ‖_∞` grew.
    pub max_principle_violations: usize,
}

/// Solves with `û₀` and with `û₀ + a·ε^{q+offset}·bump` and tests the
/// difference for negligibility against `γ(q) = q`.
pub fn uniqueness_probe(u0: &GeneralizedInitialDatum, cfg: &UniquenessConfig) -> Result<UniquenessReport> {
    let ib = &cfg.ibvp;
    let orders = OrderGrid::new(cfg.q_list.clone())?;
    let profiles = build_profiles(&orders)?;
    let grids = net_grids(&orders, &ib.eps, &profiles)?;
    let domain = ib.grid.domain;
    let base = initial_net(u0, &domain, &grids, &profiles)?;
    let mid = 0.5 * (domain.a + domain.b);
    let radius = 0.25 * domain.length();
    let shape: Vec<f64> = domain.nodes().iter().map(|&x| bump(x - mid, radius)).collect();
    let sups: Result<Vec<(f64, usize)>> = (0..grids.n_cells())
        .into_par_iter()
        .map(|c| {
            let (qi, ei) = grids.split(c);
            let (q, eps) = (grids.orders.q_values[qi], grids.eps.eps_values[ei]);
            let power = match cfg.offset {
                Some(o) => q as f64 + o as f64,
                None => 1.0,
            };
            let amp = cfg.amplitude * eps.powf(power);
            let w0: Vec<f64> = shape.iter().map(|s| amp * s).collect();
            let (u, w) = solve_difference(&base.cells[c], &w0, &ib.grid, &ib.solver)?;
            Ok((sup_abs(&w.values), step_violations(&u.step_sups)))
        })
        .collect();
    let sups = sups?;
    let max_principle_violations = sups.iter().map(|s| s.1).sum();
    let difference = ScalarNet::new(grids, sups.iter().map(|s| s.0).collect())?;
    let fit = fit_exponent(&difference)?;
    let verdict = is_negligible(&difference, &ib.policy);
    let identically_zero = difference.values.iter().all(|&v| v == 0.0);
    Ok(UniquenessReport { difference, fit, verdict, identically_zero, max_principle_violations })
}

/// The interval carrier of `Ω̄` restricted to the nodes of `Ω_l`, as used
/// for interior windows; re-exported for report writers.
pub fn interior_window(domain: &DomainSpec, l: usize) -> Result<(Carrier, (f64, f64))> {
    Ok((window_carrier(domain, l)?, exhaustion(domain, l)))
}

/// True when a net lives on the space–time carrier of `grid`.
pub fn on_cylinder(net: &FieldNet, grid: &SpaceTimeGrid) -> bool {
    net.carrier.kind == CarrierKind::SpaceTime && net.carrier.same_sampling(&grid.carrier())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> IbvpConfig {
        IbvpConfig {
            grid: SpaceTimeGrid::new(DomainSpec::unit(101).unwrap(), 0.02, 21).unwrap(),
            orders: OrderGrid::new(vec![0, 2]).unwrap(),
            eps: EpsilonGrid::geometric(0.125, 2f64.powi(-7), 5, 3).unwrap(),
            solver: SolverConfig { substeps: 5, ..SolverConfig::default() },
            ..IbvpConfig::default()
        }
    }

    #[test]
    fn zero_datum_gives_zero_solution() {
        let r = solve_generalized(&InitialDatum::smooth(|_| 0.0).into(), &small()).unwrap();
        assert!(r.solution.cells.iter().all(|c| c.iter().all(|&v| v == 0.0)));
        assert!(verify_apriori(&r).violations.is_empty());
    }

    #[test]
    fn delta_boundary_rows_are_zero() {
        let r = solve_generalized(&InitialDatum::Delta { x0: 0.5 }.into(), &small()).unwrap();
        assert!(r.boundary_trace_residual.values.iter().all(|&v| v == 0.0));
        assert!(r.initial_trace_residual.values.iter().all(|&v| v == 0.0));
        assert!(verify_apriori(&r).violations.is_empty());
    }

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        assert!(spearman(&[1.0, 1.0], &[1.0, 2.0]).is_nan());
    }

    #[test]
    fn zero_perturbation_gives_zero_difference() {
        let cfg = UniquenessConfig { ibvp: small(), q_list: vec![2, 3], amplitude: 0.0, ..UniquenessConfig::default() };
        let r = uniqueness_probe(&InitialDatum::Delta { x0: 0.5 }.into(), &cfg).unwrap();
        assert!(r.identically_zero);
    }
}
