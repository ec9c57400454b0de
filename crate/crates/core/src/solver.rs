//! Classical solver for `u_t − Δu + u³ = 0` and its linear variant
//! `v_t − Δv + a₀v = f` on `Ω × (0, T]` with zero Dirichlet data.
//!
//! The default step lags the cubic coefficient,
//! `(I − dt·Δ_h + dt·diag((uⁿ)²))·uⁿ⁺¹ = uⁿ`, which gives an M-matrix and
//! hence `‖uⁿ⁺¹‖_∞ ≤ ‖uⁿ‖_∞` for every `dt`. A Crank–Nicolson step with
//! Newton iteration is available for second-order time accuracy.

use crate::error::{Error, Result};
use crate::grid::{DomainSpec, SpaceTimeGrid};
use crate::topology::{fd_derivative, MultiIndex, DERIVATIVE_BUDGET};
use crate::tridiag::thomas_solve_in_place;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    LinearlyImplicit,
    CrankNicolsonNewton,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// Time steps taken between two stored rows of the grid.
    pub substeps: usize,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    /// When off, the solver runs the pointwise ODE `u' = −u³` and leaves the
    /// endpoint values alone.
    pub laplacian_enabled: bool,
    pub cubic_enabled: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            scheme: Scheme::LinearlyImplicit,
            substeps: 1,
            newton_tol: 1e-12,
            newton_max_iters: 50,
            laplacian_enabled: true,
            cubic_enabled: true,
        }
    }
}

impl SolverConfig {
    /// Chooses `substeps` so that the time step is `dt` on `grid`.
    pub fn with_dt(mut self, grid: &SpaceTimeGrid, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let ratio = grid.dt() / dt;
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > 1e-6 * ratio {
            return Err(Error::InvalidParameter(format!("dt = {dt} does not divide the row spacing {}", grid.dt())));
        }
        self.substeps = k as usize;
        Ok(self)
    }

    pub fn dt(&self, grid: &SpaceTimeGrid) -> f64 {
        grid.dt() / self.substeps as f64
    }

    fn validate(&self) -> Result<()> {
        if self.substeps == 0 {
            return Err(Error::InvalidParameter("substeps must be at least 1".into()));
        }
        if !(self.newton_tol > 0.0) || self.newton_max_iters == 0 {
            return Err(Error::InvalidParameter("Newton tolerance and iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// Sup norms of the initial field and of its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DatumNorms {
    pub c0: f64,
    pub d1: f64,
    pub d2: f64,
}

/// A discrete trajectory on `Q̄`, stored row by row in time.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalField {
    pub grid: SpaceTimeGrid,
    pub values: Vec<f64>,
    pub datum_norms: DatumNorms,
    /// `‖uⁿ‖_∞` after every time step, starting with the projected datum.
    pub step_sups: Vec<f64>,
    /// Largest endpoint value removed from the datum by the boundary projection.
    pub projected_boundary: f64,
    /// Newton iterations per step (Crank–Nicolson only).
    pub newton_iters: Vec<usize>,
}

impl ClassicalField {
    pub fn nx(&self) -> usize {
        self.grid.domain.nx
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let nx = self.nx();
        &self.values[k * nx..(k + 1) * nx]
    }

    pub fn final_row(&self) -> &[f64] {
        self.row(self.grid.nt - 1)
    }

    pub fn sup(&self) -> f64 {
        sup_abs(&self.values)
    }

    pub fn step_dt(&self) -> f64 {
        self.grid.t_final / (self.step_sups.len() - 1) as f64
    }
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

fn datum_norms(g: &[f64], domain: &DomainSpec) -> DatumNorms {
    let c = domain.carrier();
    let d = |k| fd_derivative(g, &c, &MultiIndex::new(vec![k])).map(|v| sup_abs(&v)).unwrap_or(f64::NAN);
    DatumNorms { c0: sup_abs(g), d1: d(1), d2: d(2) }
}

/// Reusable buffers for the tridiagonal steps.
struct Work {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl Work {
    fn new(n: usize) -> Self {
        Work { lower: vec![0.0; n], diag: vec![0.0; n], upper: vec![0.0; n], rhs: vec![0.0; n], scratch: vec![0.0; n] }
    }

    /// Fills the interior system `(I − θ·dt·Δ_h + dt·diag(c))` over nodes
    /// `1..nx−1` (Dirichlet) or the diagonal system over all nodes.
    fn assemble(&mut self, n: usize, lap: f64, coeff: impl Fn(usize) -> f64) {
        for i in 0..n {
            self.lower[i] = if i > 0 { -lap } else { 0.0 };
            self.upper[i] = if i + 1 < n { -lap } else { 0.0 };
            self.diag[i] = 1.0 + 2.0 * lap + coeff(i);
        }
    }

    fn solve(&mut self, n: usize) {
        thomas_solve_in_place(&self.lower[..n], &self.diag[..n], &self.upper[..n], &mut self.rhs[..n], &mut self.scratch[..n]);
    }
}

/// One linearly implicit step in place.
fn li_step(u: &mut [f64], dt: f64, h: f64, cfg: &SolverConfig, w: &mut Work) {
    let nx = u.len();
    let c = if cfg.cubic_enabled { dt } else { 0.0 };
    if cfg.laplacian_enabled {
        let n = nx - 2;
        let lap = dt / (h * h);
        w.assemble(n, lap, |i| c * u[i + 1] * u[i + 1]);
        w.rhs[..n].copy_from_slice(&u[1..nx - 1]);
        w.solve(n);
        u[1..nx - 1].copy_from_slice(&w.rhs[..n]);
        u[0] = 0.0;
        u[nx - 1] = 0.0;
    } else {
        for v in u.iter_mut() {
            *v /= 1.0 + c * *v * *v;
        }
    }
}

/// One Crank–Nicolson step solved by Newton iteration; returns iterations.
fn cn_step(u: &mut [f64], dt: f64, h: f64, cfg: &SolverConfig, w: &mut Work, step: usize) -> Result<usize> {
    let nx = u.len();
    let (lo, hi) = if cfg.laplacian_enabled { (1, nx - 1) } else { (0, nx) };
    let n = hi - lo;
    let lap = if cfg.laplacian_enabled { 0.5 * dt / (h * h) } else { 0.0 };
    let cub = if cfg.cubic_enabled { 0.5 * dt } else { 0.0 };
    let old = u.to_vec();
    let at = |v: &[f64], i: usize| if i < lo || i >= hi { 0.0 } else { v[i] };
    // Explicit half of the step.
    let explicit: Vec<f64> = (lo..hi)
        .map(|i| {
            let d2 = if cfg.laplacian_enabled { at(&old, i - 1) - 2.0 * old[i] + at(&old, i + 1) } else { 0.0 };
            old[i] + lap * d2 - cub * old[i].powi(3)
        })
        .collect();
    let mut v = old.clone();
    for iter in 1..=cfg.newton_max_iters {
        for (k, i) in (lo..hi).enumerate() {
            let d2 = if cfg.laplacian_enabled { at(&v, i - 1) - 2.0 * v[i] + at(&v, i + 1) } else { 0.0 };
            w.rhs[k] = -(v[i] - lap * d2 + cub * v[i].powi(3) - explicit[k]);
        }
        w.assemble(n, lap, |k| 3.0 * cub * v[k + lo] * v[k + lo]);
        w.solve(n);
        let mut delta = 0.0f64;
        for k in 0..n {
            v[k + lo] += w.rhs[k];
            delta = delta.max(w.rhs[k].abs());
        }
        if !delta.is_finite() {
            return Err(Error::NonFinite(step));
        }
        if delta <= cfg.newton_tol * (1.0 + sup_abs(&v)) {
            u.copy_from_slice(&v);
            if cfg.laplacian_enabled {
                u[0] = 0.0;
                u[nx - 1] = 0.0;
            }
            return Ok(iter);
        }
    }
    Err(Error::NewtonDivergence { step, iters: cfg.newton_max_iters })
}

/// Solves `u_t − Δu + u³ = 0`, `u = 0` on `∂Ω`, `u(·, 0) = g`.
///
/// `g` is sampled on the spatial grid; its endpoint values are projected to
/// zero (the removed magnitude is recorded) unless the Laplacian is off.
pub fn solve_semilinear(g: &[f64], grid: &SpaceTimeGrid, cfg: &SolverConfig) -> Result<ClassicalField> {
    cfg.validate()?;
    let nx = grid.domain.nx;
    if g.len() != nx {
        return Err(Error::GridMismatch(format!("datum of length {} on {nx} nodes", g.len())));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    let mut u = g.to_vec();
    let mut projected = 0.0;
    if cfg.laplacian_enabled {
        projected = u[0].abs().max(u[nx - 1].abs());
        u[0] = 0.0;
        u[nx - 1] = 0.0;
    }
    let dt = cfg.dt(grid);
    let h = grid.domain.h();
    let total = (grid.nt - 1) * cfg.substeps;
    let mut values = Vec::with_capacity(nx * grid.nt);
    values.extend_from_slice(&u);
    let mut step_sups = Vec::with_capacity(total + 1);
    step_sups.push(sup_abs(&u));
    let mut newton_iters = Vec::new();
    let mut work = Work::new(nx);
    let mut step = 0;
    for _ in 1..grid.nt {
        for _ in 0..cfg.substeps {
            step += 1;
            match cfg.scheme {
                Scheme::LinearlyImplicit => li_step(&mut u, dt, h, cfg, &mut work),
                Scheme::CrankNicolsonNewton => newton_iters.push(cn_step(&mut u, dt, h, cfg, &mut work, step)?),
            }
            let s = sup_abs(&u);
            if !s.is_finite() {
                return Err(Error::NonFinite(step));
            }
            step_sups.push(s);
        }
        values.extend_from_slice(&u);
    }
    Ok(ClassicalField { grid: *grid, values, datum_norms: datum_norms(g, &grid.domain), step_sups, projected_boundary: projected, newton_iters })
}

/// Solves `v_t − Δv + a₀v = f`, `v = 0` on `∂Ω`, `v(·, 0) = g`, with
/// `a₀(x, t) ≥ 0` checked at every node where it is used.
pub fn solve_linear<A, F>(a0: A, f: F, g: &[f64], grid: &SpaceTimeGrid, cfg: &SolverConfig) -> Result<ClassicalField>
where
    A: Fn(f64, f64) -> f64,
    F: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    let nx = grid.domain.nx;
    if g.len() != nx {
        return Err(Error::GridMismatch(format!("datum of length {} on {nx} nodes", g.len())));
    }
    let xs = grid.domain.nodes();
    let dt = cfg.dt(grid);
    let h = grid.domain.h();
    let theta = match cfg.scheme {
        Scheme::LinearlyImplicit => 1.0,
        Scheme::CrankNicolsonNewton => 0.5,
    };
    let coeff = |t: f64| -> Result<Vec<f64>> {
        xs.iter()
            .map(|&x| {
                let v = a0(x, t);
                if v < 0.0 || !v.is_finite() {
                    Err(Error::NegativeCoefficient { x, t, value: v })
                } else {
                    Ok(v)
                }
            })
            .collect()
    };
    let mut v = g.to_vec();
    let projected = v[0].abs().max(v[nx - 1].abs());
    v[0] = 0.0;
    v[nx - 1] = 0.0;
    let n = nx - 2;
    let lap = dt / (h * h);
    let mut values = Vec::with_capacity(nx * grid.nt);
    values.extend_from_slice(&v);
    let mut step_sups = vec![sup_abs(&v)];
    let mut work = Work::new(nx);
    let mut t = 0.0;
    let mut a_old = coeff(0.0)?;
    let mut step = 0;
    for _ in 1..grid.nt {
        for _ in 0..cfg.substeps {
            step += 1;
            let t_new = t + dt;
            let a_new = coeff(t_new)?;
            for k in 0..n {
                let i = k + 1;
                let explicit = (1.0 - theta) * (lap * (v[i - 1] - 2.0 * v[i] + v[i + 1]) - dt * a_old[i] * v[i]);
                let forcing = dt * (theta * f(xs[i], t_new) + (1.0 - theta) * f(xs[i], t));
                work.rhs[k] = v[i] + explicit + forcing;
            }
            work.assemble(n, theta * lap, |k| theta * dt * a_new[k + 1]);
            work.solve(n);
            v[1..nx - 1].copy_from_slice(&work.rhs[..n]);
            let s = sup_abs(&v);
            if !s.is_finite() {
                return Err(Error::NonFinite(step));
            }
            step_sups.push(s);
            t = t_new;
            a_old = a_new;
        }
        values.extend_from_slice(&v);
    }
    Ok(ClassicalField { grid: *grid, values, datum_norms: datum_norms(g, &grid.domain), step_sups, projected_boundary: projected, newton_iters: vec![] })
}

/// Two linearly implicit solutions started from `g` and `g + w0`, returned
/// as `u` and the difference `w = v − u`.
///
/// The difference is marched by its own exact discrete equation
/// `M_v wⁿ⁺¹ = wⁿ − dt·wⁿ(2uⁿ + wⁿ)·uⁿ⁺¹` with
/// `M_v = I − dt·Δ_h + dt·diag((uⁿ + wⁿ)²)`, so tiny perturbations are not
/// lost to cancellation in `v − u`.
pub fn solve_difference(g: &[f64], w0: &[f64], grid: &SpaceTimeGrid, cfg: &SolverConfig) -> Result<(ClassicalField, ClassicalField)> {
    cfg.validate()?;
    if cfg.scheme != Scheme::LinearlyImplicit || !cfg.laplacian_enabled {
        return Err(Error::InvalidParameter("difference marching needs the linearly implicit Dirichlet scheme".into()));
    }
    let nx = grid.domain.nx;
    if g.len() != nx || w0.len() != nx {
        return Err(Error::GridMismatch("data do not match the spatial grid".into()));
    }
    let c = if cfg.cubic_enabled { 1.0 } else { 0.0 };
    let mut u = g.to_vec();
    let mut w = w0.to_vec();
    let projected = u[0].abs().max(u[nx - 1].abs());
    for v in [&mut u, &mut w] {
        v[0] = 0.0;
        v[nx - 1] = 0.0;
    }
    let dt = cfg.dt(grid);
    let lap = dt / (grid.domain.h() * grid.domain.h());
    let n = nx - 2;
    let mut uvals = Vec::with_capacity(nx * grid.nt);
    let mut wvals = Vec::with_capacity(nx * grid.nt);
    uvals.extend_from_slice(&u);
    wvals.extend_from_slice(&w);
    let mut usups = vec![sup_abs(&u)];
    let mut wsups = vec![sup_abs(&w)];
    let mut work = Work::new(nx);
    let mut step = 0;
    for _ in 1..grid.nt {
        for _ in 0..cfg.substeps {
            step += 1;
            let u_old = u.clone();
            li_step(&mut u, dt, grid.domain.h(), cfg, &mut work);
            work.assemble(n, lap, |k| c * dt * (u_old[k + 1] + w[k + 1]).powi(2));
            for k in 0..n {
                let i = k + 1;
                work.rhs[k] = w[i] - c * dt * w[i] * (2.0 * u_old[i] + w[i]) * u[i];
            }
            work.solve(n);
            w[1..nx - 1].copy_from_slice(&work.rhs[..n]);
            let (su, sw) = (sup_abs(&u), sup_abs(&w));
            if !su.is_finite() || !sw.is_finite() {
                return Err(Error::NonFinite(step));
            }
            usups.push(su);
            wsups.push(sw);
        }
        uvals.extend_from_slice(&u);
        wvals.extend_from_slice(&w);
    }
    let uf = ClassicalField { grid: *grid, values: uvals, datum_norms: datum_norms(g, &grid.domain), step_sups: usups, projected_boundary: projected, newton_iters: vec![] };
    let wf = ClassicalField { grid: *grid, values: wvals, datum_norms: datum_norms(w0, &grid.domain), step_sups: wsups, projected_boundary: 0.0, newton_iters: vec![] };
    Ok((uf, wf))
}

/// `∂^σ u` on `Q̄` with `σ = (σ_x, σ_t)`.
pub fn derivative_field(u: &ClassicalField, sigma: &MultiIndex) -> Result<Vec<f64>> {
    fd_derivative(&u.values, &u.grid.carrier(), sigma)
}

/// `‖u‖_{C^k(Q̄)} = Σ_{|σ| ≤ k} ‖∂^σ u‖_∞` for `k ≤ 2`.
pub fn ck_norm(u: &ClassicalField, k: usize) -> Result<f64> {
    if k > DERIVATIVE_BUDGET {
        return Err(Error::DerivativeBudget { axis: 0, order: k, budget: DERIVATIVE_BUDGET });
    }
    let mut total = 0.0;
    for sx in 0..=k {
        for st in 0..=k - sx {
            total += sup_abs(&derivative_field(u, &MultiIndex::new(vec![sx, st]))?);
        }
    }
    Ok(total)
}

/// A problem with a known solution for convergence studies.
pub struct ReferenceProblem {
    pub domain: (f64, f64),
    pub t_final: f64,
    pub initial: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub exact: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub config: SolverConfig,
}

impl ReferenceProblem {
    /// `u₀ = sin(πx)` on `(0, 1)` for the heat equation (cubic off).
    pub fn linear_sine(t_final: f64) -> Self {
        use std::f64::consts::PI;
        ReferenceProblem {
            domain: (0.0, 1.0),
            t_final,
            initial: Box::new(|x| (PI * x).sin()),
            exact: Box::new(|x, t| (-PI * PI * t).exp() * (PI * x).sin()),
            config: SolverConfig { cubic_enabled: false, ..SolverConfig::default() },
        }
    }

    /// `u₀ ≡ 0`, whose solution is zero.
    pub fn zero(t_final: f64) -> Self {
        ReferenceProblem {
            domain: (0.0, 1.0),
            t_final,
            initial: Box::new(|_| 0.0),
            exact: Box::new(|_, _| 0.0),
            config: SolverConfig::default(),
        }
    }
}

/// Grids of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub enum Refinement {
    /// Spatial refinement at a fixed time step.
    Space { nx: Vec<usize>, dt: f64 },
    /// Time-step refinement at a fixed spatial grid.
    Time { nx: usize, dt: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub dt: f64,
    /// The refined quantity: `h` or `dt`.
    pub size: f64,
    /// Sup error at the final time.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// `log(e_k / e_{k+1}) / log(size_k / size_{k+1})` for consecutive grids.
    pub observed_orders: Vec<f64>,
    /// `e_k / e_{k+1}` for consecutive grids.
    pub ratios: Vec<f64>,
    /// Least-squares order over all grids; `None` when an error is zero.
    pub fitted_order: Option<f64>,
}

/// Runs `problem` on each grid and measures the final-time sup error.
pub fn convergence_study(problem: &ReferenceProblem, refinement: &Refinement) -> Result<ConvergenceReport> {
    let plan: Vec<(usize, f64)> = match refinement {
        Refinement::Space { nx, dt } => nx.iter().map(|&n| (n, *dt)).collect(),
        Refinement::Time { nx, dt } => dt.iter().map(|&d| (*nx, d)).collect(),
    };
    if plan.len() < 3 {
        return Err(Error::InvalidParameter("a convergence study needs at least three grids".into()));
    }
    let mut rows = Vec::with_capacity(plan.len());
    for (nx, dt) in plan {
        let domain = DomainSpec::new(problem.domain.0, problem.domain.1, nx)?;
        let steps = (problem.t_final / dt).round() as usize;
        if steps == 0 || ((steps as f64) * dt - problem.t_final).abs() > 1e-9 * problem.t_final {
            return Err(Error::InvalidParameter(format!("dt = {dt} does not divide T = {}", problem.t_final)));
        }
        // Store the fewest rows (at least 16) that divide the step count.
        let stored = (15..=steps).find(|d| steps % d == 0).ok_or_else(|| Error::InvalidParameter(format!("T / dt = {steps} steps, need at least 15")))?;
        let grid = SpaceTimeGrid::new(domain, problem.t_final, stored + 1)?;
        let cfg = SolverConfig { substeps: steps / stored, ..problem.config };
        let g: Vec<f64> = domain.nodes().iter().map(|&x| (problem.initial)(x)).collect();
        let u = solve_semilinear(&g, &grid, &cfg)?;
        let error = domain
            .nodes()
            .iter()
            .zip(u.final_row())
            .fold(0.0f64, |m, (&x, &v)| m.max((v - (problem.exact)(x, problem.t_final)).abs()));
        let size = match refinement {
            Refinement::Space { .. } => domain.h(),
            Refinement::Time { .. } => dt,
        };
        rows.push(ConvergenceRow { nx, dt, size, error });
    }
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[0].error / w[1].error).collect();
    let observed_orders = rows.windows(2).map(|w| (w[0].error / w[1].error).ln() / (w[0].size / w[1].size).ln()).collect();
    let fitted_order = if rows.iter().all(|r| r.error > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|r| r.size.ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.error.ln()).collect();
        crate::nets::fit_line(&xs, &ys).ok().map(|f| f.0)
    } else {
        None
    };
    Ok(ConvergenceReport { rows, observed_orders, ratios, fitted_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(nx: usize, t: f64, nt: usize) -> SpaceTimeGrid {
        SpaceTimeGrid::new(DomainSpec::unit(nx).unwrap(), t, nt).unwrap()
    }

    #[test]
    fn zero_datum_stays_zero() {
        let g = grid(41, 0.1, 21);
        let u = solve_semilinear(&vec![0.0; 41], &g, &SolverConfig::default()).unwrap();
        assert!(u.values.iter().all(|&v| v == 0.0));
        assert_eq!(ck_norm(&u, 2).unwrap(), 0.0);
    }

    #[test]
    fn heat_sine_decay() {
        let g = grid(201, 0.1, 101);
        let cfg = SolverConfig { cubic_enabled: false, ..SolverConfig::default() }.with_dt(&g, 1e-4).unwrap();
        let u0: Vec<f64> = g.domain.nodes().iter().map(|x| (PI * x).sin()).collect();
        let u = solve_semilinear(&u0, &g, &cfg).unwrap();
        let decay = (-PI * PI * 0.1).exp();
        let err = g.domain.nodes().iter().zip(u.final_row()).fold(0.0f64, |m, (x, v)| m.max((v - decay * (PI * x).sin()).abs()));
        assert!(err / decay <= 1e-3, "{}", err / decay);
    }

    #[test]
    fn cubic_ode_mode() {
        let g = grid(16, 1.0, 101);
        let cfg = SolverConfig { laplacian_enabled: false, scheme: Scheme::CrankNicolsonNewton, ..SolverConfig::default() }
            .with_dt(&g, 1e-3)
            .unwrap();
        let u = solve_semilinear(&vec![2.0; 16], &g, &cfg).unwrap();
        for k in 0..g.nt {
            let t = g.time_axis().node(k);
            let exact = 2.0 / (1.0 + 8.0 * t).sqrt();
            assert!(u.row(k).iter().all(|v| (v - exact).abs() <= 1e-4));
        }
    }

    #[test]
    fn linear_variant_decay_and_sign_check() {
        let g = grid(201, 0.1, 101);
        let cfg = SolverConfig::default().with_dt(&g, 1e-4).unwrap();
        let u0: Vec<f64> = g.domain.nodes().iter().map(|x| (PI * x).sin()).collect();
        let v = solve_linear(|_, _| 1.0, |_, _| 0.0, &u0, &g, &cfg).unwrap();
        let decay = (-(PI * PI + 1.0) * 0.1).exp();
        let err = g.domain.nodes().iter().zip(v.final_row()).fold(0.0f64, |m, (x, v)| m.max((v - decay * (PI * x).sin()).abs()));
        assert!(err <= 1e-3, "{err}");
        assert!(matches!(solve_linear(|x, _| x - 0.5, |_, _| 0.0, &u0, &g, &cfg), Err(Error::NegativeCoefficient { .. })));
    }

    #[test]
    fn difference_matches_direct_subtraction() {
        let g = grid(101, 0.05, 51);
        let cfg = SolverConfig::default().with_dt(&g, 1e-4).unwrap();
        let x = g.domain.nodes();
        let u0: Vec<f64> = x.iter().map(|x| 10.0 * (PI * x).sin()).collect();
        let w0: Vec<f64> = x.iter().map(|x| 0.3 * (2.0 * PI * x).sin()).collect();
        let v0: Vec<f64> = u0.iter().zip(&w0).map(|(a, b)| a + b).collect();
        let (u, w) = solve_difference(&u0, &w0, &g, &cfg).unwrap();
        let v = solve_semilinear(&v0, &g, &cfg).unwrap();
        let u_direct = solve_semilinear(&u0, &g, &cfg).unwrap();
        assert_eq!(u.values, u_direct.values);
        for ((a, b), c) in v.values.iter().zip(&u.values).zip(&w.values) {
            assert!((a - b - c).abs() < 1e-12);
        }
    }

    #[test]
    fn newton_scheme_keeps_boundary() {
        let g = grid(51, 0.02, 21);
        let cfg = SolverConfig { scheme: Scheme::CrankNicolsonNewton, ..SolverConfig::default() }.with_dt(&g, 1e-4).unwrap();
        let u0: Vec<f64> = g.domain.nodes().iter().map(|x| 5.0 * (PI * x).sin()).collect();
        let u = solve_semilinear(&u0, &g, &cfg).unwrap();
        for k in 0..g.nt {
            assert_eq!(u.row(k)[0], 0.0);
            assert_eq!(u.row(k)[50], 0.0);
        }
        assert!(u.newton_iters.iter().all(|&n| n <= 6));
    }
}
