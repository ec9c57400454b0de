//! The `colombeau` batch runner.
//!
//! `colombeau <experiment> --config <path> [--out <dir>] [--jobs <n>] [--seed <n>]`
//!
//! Exit status: 0 when every emitted `pass` column is true, 1 when some row
//! has `pass = false`, 2 on configuration or usage errors.

use std::path::{Path, PathBuf};

use clap::Parser;

use crate::config::{Experiment, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{DomainSpec, SpaceTimeGrid};
use crate::ibvp::{self, CutoffRunConfig, GeneralizedInitialDatum, IbvpConfig, UniquenessConfig, ViolationKind};
use crate::mollifier::{build_mollifier, MollifierSpec};
use crate::nets::{EpsilonGrid, NetGrids, OrderGrid, OrderTest, Outcome};
use crate::report::{self, fmt_b, fmt_f, Table};
use crate::solver::{convergence_study, solve_semilinear, ReferenceProblem, Refinement, Scheme, SolverConfig};
use crate::suite;
use crate::topology::{check_filter_axioms, FilterAxiomConfig, PowerLawGenerator};

#[derive(Debug, Parser)]
#[command(name = "colombeau", version, about = "Generalized-function experiments for the semilinear heat equation")]
pub struct Args {
    /// One of mollifier-check, net-fit, topology-axioms, solve-classical,
    /// ibvp-run, ibvp-cauchy, ibvp-unique, full-suite.
    pub experiment: Experiment,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "COLOMBEAU_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Tables emitted by one experiment, with their output directory.
#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl RunSummary {
    fn new(dir: &Path) -> Self {
        RunSummary { dir: dir.to_path_buf(), ..Default::default() }
    }

    pub fn failures(&self) -> usize {
        self.tables.iter().map(|t| t.failures().len()).sum()
    }

    /// `(file, row)` of the first `pass = false` row.
    pub fn first_failure(&self) -> Option<(PathBuf, &Vec<String>, &Table)> {
        self.tables.iter().find_map(|t| t.failures().first().map(|&i| (self.dir.join(&t.file), &t.rows[i], t)))
    }

    fn emit(&mut self, t: Table) -> Result<()> {
        t.write(&self.dir)?;
        self.tables.push(t);
        Ok(())
    }
}

/// Parses `args`, runs the experiment and returns the exit status.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut cfg = match RunConfig::from_file(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", args.config.display());
            return 2;
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(cfg_exp) = cfg.experiment {
        if cfg_exp != args.experiment {
            eprintln!("note: config names experiment {cfg_exp}, running {} as requested", args.experiment);
        }
    }
    let out = args.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    if let Err(e) = std::fs::create_dir_all(&out) {
        eprintln!("output directory {} is not writable: {e}", out.display());
        return 2;
    }
    let jobs = args.jobs.or(cfg.jobs).unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start worker pool: {e}");
            return 2;
        }
    };
    let started = std::time::Instant::now();
    let result = pool.install(|| run(args.experiment, &cfg, &out));
    match result {
        Ok(summaries) => {
            let failures: usize = summaries.iter().map(|s| s.failures()).sum();
            print_summary(&summaries, started.elapsed().as_secs_f64());
            if failures > 0 {
                if let Some((file, row, table)) = summaries.iter().find_map(|s| s.first_failure()) {
                    println!("FAIL first failing row in {}: {}", file.display(), describe_row(table, row));
                }
                1
            } else {
                0
            }
        }
        // A gap or support that does not fit the configured grid is a
        // configuration problem, not a failed invariant.
        Err(e @ (Error::Config { .. } | Error::InvalidParameter(_) | Error::UnresolvableCutoffGap { .. } | Error::SupportEscapesDomain { .. })) => {
            eprintln!("configuration error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn describe_row(t: &Table, row: &[String]) -> String {
    t.header.iter().zip(row).map(|(h, v)| format!("{h}={v}")).collect::<Vec<_>>().join(", ")
}

fn print_summary(summaries: &[RunSummary], secs: f64) {
    for s in summaries {
        println!("== {}", s.dir.display());
        for t in &s.tables {
            match t.pass {
                Some(_) => {
                    let f = t.failures().len();
                    println!("  {:<34} {:>6} rows  {}", t.file, t.rows.len(), if f == 0 { "pass".to_string() } else { format!("{f} FAILED") });
                }
                None => println!("  {:<34} {:>6} rows", t.file, t.rows.len()),
            }
        }
        for n in &s.notes {
            println!("  {n}");
        }
    }
    println!("finished in {secs:.1}s");
}

/// Runs one experiment (all of them for `full-suite`) into `out`.
pub fn run(experiment: Experiment, cfg: &RunConfig, out: &Path) -> Result<Vec<RunSummary>> {
    cfg.validate()?;
    if experiment == Experiment::FullSuite {
        return Experiment::ALL
            .iter()
            .filter(|&&e| e != Experiment::FullSuite)
            .map(|&e| run_one(e, cfg, &out.join(e.name())))
            .collect();
    }
    Ok(vec![run_one(experiment, cfg, out)?])
}

fn run_one(experiment: Experiment, cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(dir)?;
    let mut s = RunSummary::new(dir);
    match experiment {
        Experiment::MollifierCheck => mollifier_check(cfg, &mut s)?,
        Experiment::NetFit => net_fit(cfg, &mut s)?,
        Experiment::TopologyAxioms => topology_axioms(cfg, &mut s)?,
        Experiment::SolveClassical => solve_classical(cfg, &mut s)?,
        Experiment::IbvpRun => ibvp_run(cfg, &mut s)?,
        Experiment::IbvpCauchy => ibvp_cauchy(cfg, &mut s)?,
        Experiment::IbvpUnique => ibvp_unique(cfg, &mut s)?,
        Experiment::FullSuite => unreachable!("expanded by run"),
    }
    Ok(s)
}

/// Tolerance on `|∫ x^j φ − δ_{j0}|`.
pub const MOMENT_TOL: f64 = 1e-8;

pub fn orders(cfg: &RunConfig) -> OrderGrid {
    OrderGrid::up_to(cfg.q_max)
}

pub fn eps_grid(cfg: &RunConfig) -> Result<EpsilonGrid> {
    EpsilonGrid::geometric(cfg.eps_max, cfg.eps_min, cfg.eps_count, cfg.fit_window)
}

pub fn domain(cfg: &RunConfig) -> Result<DomainSpec> {
    DomainSpec::new(cfg.a, cfg.b, cfg.nx)
}

pub fn ibvp_config(cfg: &RunConfig) -> Result<IbvpConfig> {
    Ok(IbvpConfig {
        grid: SpaceTimeGrid::new(domain(cfg)?, cfg.t_final, cfg.nt)?,
        orders: orders(cfg),
        eps: eps_grid(cfg)?,
        solver: SolverConfig { substeps: cfg.substeps, ..SolverConfig::default() },
        ..IbvpConfig::default()
    })
}

fn lattice(cfg: &RunConfig) -> Result<NetGrids> {
    let profiles = ibvp::build_profiles(&orders(cfg))?;
    ibvp::net_grids(&orders(cfg), &eps_grid(cfg)?, &profiles)
}

fn mollifier_check(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let q: Vec<usize> = (0..=cfg.q_max).collect();
    let mut t = Table::new("moments.csv", &["q", "j", "moment", "target", "abs_error", "pass"]);
    for r in suite::moment_rows(&q)? {
        t.push(vec![r.q.to_string(), r.j.to_string(), fmt_f(r.value), fmt_f(r.target), fmt_f(r.error()), fmt_b(r.error() <= MOMENT_TOL)]);
    }
    s.emit(t)?;
    let mut p = Table::new("profiles.csv", &["q", "x", "phi"]);
    for &qq in &q {
        let prof = build_mollifier(MollifierSpec::with_order(qq))?;
        let r = prof.radius();
        for k in 0..=200 {
            let x = -r + 2.0 * r * k as f64 / 200.0;
            p.push(vec![qq.to_string(), fmt_f(x), fmt_f(prof.eval(x))]);
        }
    }
    s.emit(p)
}

fn net_fit(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let grids = lattice(cfg)?;
    let policy = IbvpConfig::default().policy;
    let cases = suite::negligibility_battery(&grids)?;
    let mut t = Table::new("battery.csv", &["case", "expected", "outcome", "pass"]);
    for (i, c) in cases.iter().enumerate() {
        let v = crate::nets::is_negligible(&c.net, &policy);
        t.push(vec![c.name.into(), outcome(c.expected), outcome(v.outcome), fmt_b(v.outcome == c.expected)]);
        s.emit(report::exponent_fit(&format!("fits/case{i:02}.csv"), &v))?;
    }
    s.emit(t)
}

fn outcome(o: Outcome) -> String {
    match o {
        Outcome::Yes => "yes",
        Outcome::No => "no",
        Outcome::Inconclusive => "inconclusive",
    }
    .into()
}

fn topology_axioms(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let grids = lattice(cfg)?;
    let dom = domain(cfg)?;
    let test = OrderTest::default();

    let mut t = Table::new("algebra.csv", &["kind", "trial", "sigma", "lhs", "rhs", "tolerance", "pass"]);
    for r in suite::seminorm_algebra(&grids, &dom, cfg.trials, cfg.seed)? {
        t.push(vec![r.kind.into(), r.trial.to_string(), r.sigma.to_string(), fmt_f(r.lhs), fmt_f(r.rhs), fmt_f(r.tolerance), fmt_b(r.pass)]);
    }
    s.emit(t)?;

    let mut t = Table::new("scale.csv", &["k", "r", "s", "expected", "accepted", "pass"]);
    for c in suite::scale_battery(&grids, &test)? {
        t.push(vec![fmt_f(c.k), fmt_f(c.r), fmt_f(c.s), fmt_b(c.expected), fmt_b(c.accepted), fmt_b(c.pass())]);
    }
    s.emit(t)?;

    let fa = FilterAxiomConfig { trials: cfg.trials, seed: cfg.seed, ..FilterAxiomConfig::default() };
    let mut gen = PowerLawGenerator::new(grids.clone(), dom.carrier(), cfg.seed);
    let rep = check_filter_axioms(&mut gen, &fa)?;
    for (id, nets) in &rep.counterexamples {
        for (k, n) in nets.iter().enumerate() {
            s.emit(report::field_net(&format!("counterexamples/{id}-{k}.csv"), n))?;
        }
    }
    s.emit(report::axioms("axioms.csv", &rep))?;

    let grid = SpaceTimeGrid::new(dom, cfg.t_final, cfg.nt)?;
    let r = 1.0;
    let cases = suite::trace_battery(&grids, &grid, 1, r, cfg.trace_trials, cfg.seed, &test)?;
    let mut t = Table::new("trace.csv", &["s", "trial", "t0", "in_W"]);
    for c in &cases {
        t.push(vec![fmt_f(c.s), c.trial.to_string(), fmt_f(c.t0), fmt_b(c.member)]);
    }
    s.emit(t)?;
    let mut t = Table::new("trace_summary.csv", &["s", "members", "trials", "expectation", "pass"]);
    for (sv, all) in [(2.0 * r + 0.5, true), (2.0 * r - 0.5, false)] {
        let rows: Vec<_> = cases.iter().filter(|c| c.s == sv).collect();
        let m = rows.iter().filter(|c| c.member).count();
        let pass = if all { m == rows.len() } else { m < rows.len() };
        t.push(vec![fmt_f(sv), m.to_string(), rows.len().to_string(), if all { "all members" } else { "some rejected" }.into(), fmt_b(pass)]);
    }
    s.emit(t)?;

    let fine = DomainSpec::new(cfg.a, cfg.b, cfg.cauchy_nx)?;
    let l_max = max_cutoff_level(&fine);
    let nu_max = l_max.saturating_sub(2).max(1);
    let mut t = Table::new("density.csv", &["f", "nu", "l_max", "l0", "pass"]);
    for c in suite::cutoff_density_battery(&grids, &fine, nu_max, l_max, cfg.seed)? {
        t.push(vec![c.name.into(), c.nu.to_string(), c.l_max.to_string(), c.l0.map_or("none".into(), |l| l.to_string()), fmt_b(c.l0.is_some())]);
    }
    s.emit(t)?;

    let wide = NetGrids::with_diameter(OrderGrid::up_to(12), eps_grid(cfg)?, 2.0)?;
    let small = SpaceTimeGrid::new(DomainSpec::new(cfg.a, cfg.b, 101)?, cfg.t_final, 51)?;
    let mut t = Table::new("cauchy_limit.csv", &["lambda", "p", "theta", "checked", "pass"]);
    for c in suite::cauchy_limit_battery(&wide, &small, 8, cfg.seed, &test)? {
        t.push(vec![c.lambda.to_string(), fmt_f(c.p), c.theta.map_or("none".into(), |x| x.to_string()), c.member.len().to_string(), fmt_b(c.pass())]);
    }
    s.emit(t)
}

/// Largest cutoff level whose gap spans [`crate::domains::MIN_GAP_CELLS`]
/// cells of `domain`.
pub fn max_cutoff_level(domain: &DomainSpec) -> usize {
    let mut l = 0;
    while crate::domains::build_cutoff(domain, l + 1).is_ok() && l < 64 {
        l += 1;
    }
    l
}

/// Tolerances of the classical regression.
pub const LINEAR_REL_TOL: f64 = 1e-3;
pub const ODE_TOL: f64 = 1e-4;
pub const RATIO_TARGET: f64 = 4.0;
pub const RATIO_TOL: f64 = 0.5;

fn solve_classical(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    use std::f64::consts::PI;
    let t_final = cfg.t_final;
    let steps = (t_final / cfg.classical_dt).round() as usize;
    let stored = (15..=steps.max(15)).find(|d| steps % d == 0).unwrap_or(steps);
    let grid = SpaceTimeGrid::new(DomainSpec::unit(cfg.classical_nx)?, t_final, stored + 1)?;
    let lin = SolverConfig { cubic_enabled: false, ..SolverConfig::default() }.with_dt(&grid, cfg.classical_dt)?;
    let g: Vec<f64> = grid.domain.nodes().iter().map(|&x| (PI * x).sin()).collect();
    let u = solve_semilinear(&g, &grid, &lin)?;
    let decay = (-PI * PI * t_final).exp();
    let lin_err = grid.domain.nodes().iter().zip(u.final_row()).fold(0.0f64, |m, (&x, &v)| m.max((v - decay * (PI * x).sin()).abs())) / decay;

    let ode_grid = SpaceTimeGrid::new(DomainSpec::unit(16)?, t_final, stored + 1)?;
    let ode = SolverConfig { laplacian_enabled: false, scheme: Scheme::CrankNicolsonNewton, ..SolverConfig::default() }.with_dt(&ode_grid, cfg.classical_dt)?;
    let mut ode_err = 0.0f64;
    for u0 in [0.5, 2.0, -3.0] {
        let v = solve_semilinear(&vec![u0; 16], &ode_grid, &ode)?;
        for k in 0..ode_grid.nt {
            let t = ode_grid.time_axis().node(k);
            let exact = u0 / (1.0 + 2.0 * u0 * u0 * t).sqrt();
            ode_err = v.row(k).iter().fold(ode_err, |m, &x| m.max((x - exact).abs()));
        }
    }
    let mut t = Table::new("regression.csv", &["case", "nx", "dt", "error", "tolerance", "pass"]);
    t.push(vec!["heat sine, relative sup error at T".into(), cfg.classical_nx.to_string(), fmt_f(cfg.classical_dt), fmt_f(lin_err), fmt_f(LINEAR_REL_TOL), fmt_b(lin_err <= LINEAR_REL_TOL)]);
    t.push(vec!["ode u' = -u^3, sup error".into(), "16".into(), fmt_f(cfg.classical_dt), fmt_f(ode_err), fmt_f(ODE_TOL), fmt_b(ode_err <= ODE_TOL)]);
    s.emit(t)?;

    let problem = ReferenceProblem { config: SolverConfig { scheme: Scheme::CrankNicolsonNewton, cubic_enabled: false, ..SolverConfig::default() }, ..ReferenceProblem::linear_sine(t_final) };
    let space = convergence_study(&problem, &Refinement::Space { nx: vec![21, 41, 81], dt: 1e-4 })?;
    let time = convergence_study(&ReferenceProblem::linear_sine(t_final), &Refinement::Time { nx: 401, dt: vec![1e-3, 5e-4, 2.5e-4] })?;
    let mut t = Table::new("convergence.csv", &["refinement", "nx", "dt", "error", "ratio", "observed_order", "pass"]);
    for (name, rep, target) in [("space", &space, RATIO_TARGET), ("time", &time, 2.0)] {
        for (i, r) in rep.rows.iter().enumerate() {
            let (ratio, order, pass) = if i == 0 {
                (String::new(), String::new(), String::from("true"))
            } else {
                let ratio = rep.ratios[i - 1];
                let tol = if name == "space" { RATIO_TOL } else { 0.25 * target };
                (fmt_f(ratio), fmt_f(rep.observed_orders[i - 1]), fmt_b((ratio - target).abs() <= tol))
            };
            t.push(vec![name.into(), r.nx.to_string(), fmt_f(r.dt), fmt_f(r.error), ratio, order, pass]);
        }
    }
    s.emit(t)?;
    s.emit(trajectory_of(&u, 10))?;
    s.notes.push(format!("spatial order ≈ {:.3}, temporal order ≈ {:.3}", space.fitted_order.unwrap_or(f64::NAN), time.fitted_order.unwrap_or(f64::NAN)));
    Ok(())
}

fn trajectory_of(u: &crate::solver::ClassicalField, stride: usize) -> Table {
    let mut t = Table::new("trajectory.csv", &["t", "x", "value"]);
    let (xa, ta) = (u.grid.domain.axis(), u.grid.time_axis());
    for k in (0..ta.len).step_by(stride) {
        for i in (0..xa.len).step_by(stride) {
            t.push(vec![fmt_f(ta.node(k)), fmt_f(xa.node(i)), fmt_f(u.row(k)[i])]);
        }
    }
    t
}

fn sigma_slug(sigma: &crate::topology::MultiIndex) -> String {
    sigma.components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("_")
}

fn ibvp_run(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let icfg = ibvp_config(cfg)?;
    let u0: GeneralizedInitialDatum = cfg.datum.to_datum().into();
    let res = ibvp::solve_generalized(&u0, &icfg)?;
    s.emit(report::seminorm_nets("seminorms.csv", &res.seminorm_nets))?;
    let mut verdicts = Table::new("verdicts.csv", &["sigma", "verdict", "min_slope", "max_residual", "pass"]);
    for (sigma, v) in &res.moderate_verdicts {
        s.emit(report::exponent_fit(&format!("fits/sigma_{}.csv", sigma_slug(sigma)), v))?;
        let min_slope = v.fit.rows.iter().map(|r| r.slope).fold(f64::INFINITY, f64::min);
        let max_res = v.fit.rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        verdicts.push(vec![sigma.to_string(), report::verdict_label(v), fmt_f(min_slope), fmt_f(max_res), fmt_b(v.outcome == Outcome::Yes)]);
    }
    s.emit(verdicts)?;
    s.emit(report::scalar_net("initial_trace_residual.csv", &res.initial_trace_residual))?;
    s.emit(report::scalar_net("interior_trace_residual.csv", &res.interior_trace_residual))?;
    s.emit(report::scalar_net("boundary_trace_residual.csv", &res.boundary_trace_residual))?;
    s.emit(report::field_net("initial.csv", &res.initial))?;

    let ap = ibvp::verify_apriori(&res);
    let mut t = Table::new("apriori.csv", &["q", "eps", "check", "violations", "pass"]);
    for (c, cell) in res.cells.iter().enumerate() {
        for (kind, name) in [(ViolationKind::K0Bound, "k0_bound"), (ViolationKind::StepMonotonicity, "step_monotonicity"), (ViolationKind::Smoothing, "smoothing")] {
            let n = ap.violations.iter().filter(|v| v.kind == kind && v.q == cell.q && v.eps == cell.eps).count();
            let failed = res.failures.iter().any(|(fc, _)| *fc == c);
            t.push(vec![cell.q.to_string(), fmt_f(cell.eps), name.into(), n.to_string(), fmt_b(n == 0 && !failed)]);
        }
    }
    s.emit(t)?;
    let mut checks = Table::new("checks.csv", &["check", "value", "bound", "pass"]);
    let b = res.boundary_trace_residual.max_value();
    checks.push(vec!["boundary trace residual".into(), fmt_f(b), fmt_f(0.0), fmt_b(b == 0.0)]);
    checks.push(vec!["failed cells".into(), res.failures.len().to_string(), "0".into(), fmt_b(res.failures.is_empty())]);
    s.emit(checks)?;
    let qi = icfg.orders.q_values.iter().position(|&q| q == 2).unwrap_or(0);
    s.emit(report::trajectory("trajectory.csv", &res.solution, res.grids.cell(qi, 0), 4))?;
    s.notes.push(format!("datum {}, largest smoothing ratio {:.4}", cfg.datum.label(), ap.max_smoothing_ratio));
    Ok(())
}

fn ibvp_cauchy(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let mut ib = ibvp_config(cfg)?;
    ib.grid = SpaceTimeGrid::new(DomainSpec::new(cfg.a, cfg.b, cfg.cauchy_nx)?, cfg.t_final, cfg.cauchy_nt)?;
    ib.solver.substeps = cfg.cauchy_substeps;
    let ccfg = CutoffRunConfig { ibvp: ib, p_max: cfg.cauchy_p_max, ..CutoffRunConfig::default() };
    let u0: GeneralizedInitialDatum = cfg.cauchy_datum.to_datum().into();
    let rep = ibvp::cutoff_sequence_run(&u0, &ccfg)?;
    s.emit(report::cauchy("cauchy.csv", &rep))?;

    let mut t = Table::new("pairs.csv", &["p", "q_pair", "max_sup", "apq_min", "apq_identity_ulps", "chain_residual", "identically_zero", "pass"]);
    for pr in &rep.pairs {
        let pass = pr.apq_min >= 0.0 && pr.apq_identity_ulps <= 4.0;
        t.push(vec![pr.p.to_string(), pr.q.to_string(), fmt_f(pr.sup_net().max_value()), fmt_f(pr.apq_min), fmt_f(pr.apq_identity_ulps), fmt_f(pr.chain_residual), fmt_b(pr.identically_zero), fmt_b(pass)]);
        s.emit(report::seminorm_nets(&format!("pairs/p{}_q{}.csv", pr.p, pr.q), &pr.seminorms))?;
    }
    s.emit(t)?;

    let mut t = Table::new("trend.csv", &["q", "eps", "spearman", "consecutive_decreasing", "pass"]);
    for c in 0..rep.grids.n_cells() {
        let (qi, ei) = rep.grids.split(c);
        let pass = rep.p0.is_some() || (rep.consecutive_decreasing[c] && rep.spearman[c] >= 0.9);
        t.push(vec![rep.grids.orders.q_values[qi].to_string(), fmt_f(rep.grids.eps.eps_values[ei]), fmt_f(rep.spearman[c]), fmt_b(rep.consecutive_decreasing[c]), fmt_b(pass)]);
    }
    s.emit(t)?;

    let mut checks = Table::new("checks.csv", &["check", "value", "bound", "pass"]);
    checks.push(vec!["max principle violations".into(), rep.max_principle_violations.to_string(), "0".into(), fmt_b(rep.max_principle_violations == 0)]);
    match ibvp::limit_assembly(&rep, &u0) {
        Ok(lim) => {
            s.emit(report::scalar_net("limit_interior_residual.csv", &lim.interior_residual))?;
            s.emit(report::exponent_fit("limit_interior_fit.csv", &lim.interior_verdict))?;
            s.emit(report::scalar_net("limit_boundary_sup.csv", &lim.boundary_sup))?;
            s.emit(report::scalar_net("limit_minus_last.csv", &rep.limit_minus_last))?;
            checks.push(vec!["limit boundary trace".into(), fmt_f(lim.boundary_sup.max_value()), fmt_f(0.0), fmt_b(lim.boundary_zero)]);
            if let (Some(dr), Some(df)) = (&lim.datum_residual, &lim.datum_fit) {
                s.emit(report::scalar_net("datum_interior_residual.csv", dr))?;
                let lim_min = lim.interior_fit.rows.iter().map(|r| r.slope).fold(f64::INFINITY, f64::min);
                let dat_min = df.rows.iter().map(|r| r.slope).fold(f64::INFINITY, f64::min);
                checks.push(vec!["limit residual exponent vs datum residual exponent".into(), fmt_f(lim_min), fmt_f(dat_min), fmt_b(lim_min >= dat_min)]);
            }
        }
        Err(e) => {
            checks.push(vec![format!("limit assembly: {e}"), String::new(), String::new(), fmt_b(false)]);
        }
    }
    s.emit(checks)?;
    s.notes.push(format!("datum {}, P = {}, p0 = {:?}, min Spearman {:.4}", cfg.cauchy_datum.label(), cfg.cauchy_p_max, rep.p0, rep.spearman_min()));
    Ok(())
}

fn ibvp_unique(cfg: &RunConfig, s: &mut RunSummary) -> Result<()> {
    let base = UniquenessConfig { ibvp: ibvp_config(cfg)?, q_list: (cfg.unique_q_min..=cfg.unique_q_max).collect(), offset: Some(cfg.unique_offset), amplitude: 1.0 };
    let u0: GeneralizedInitialDatum = cfg.datum.to_datum().into();
    let mut verdicts = Table::new("verdicts.csv", &["perturbation", "expected", "outcome", "pass"]);
    let mut slopes = Table::new("unique.csv", &["perturbation", "q", "slope", "required", "pass"]);
    let mut checks = Table::new("checks.csv", &["check", "value", "bound", "pass"]);
    for (label, offset, expected) in [("offset", Some(cfg.unique_offset), Outcome::Yes), ("control", None, Outcome::No)] {
        let rep = ibvp::uniqueness_probe(&u0, &UniquenessConfig { offset, ..base.clone() })?;
        s.emit(report::scalar_net(&format!("difference_{label}.csv"), &rep.difference))?;
        s.emit(report::exponent_fit(&format!("fits_{label}.csv"), &rep.verdict))?;
        verdicts.push(vec![label.into(), outcome(expected), outcome(rep.verdict.outcome), fmt_b(rep.verdict.outcome == expected)]);
        if let Some(o) = offset {
            for r in &rep.fit.rows {
                let required = r.q as f64 + o as f64 - 1.0;
                slopes.push(vec![label.into(), r.q.to_string(), fmt_f(r.slope), fmt_f(required), fmt_b(r.slope >= required)]);
            }
        }
        checks.push(vec![format!("{label}: max principle violations"), rep.max_principle_violations.to_string(), "0".into(), fmt_b(rep.max_principle_violations == 0)]);
        s.notes.push(format!("{label}: {}", rep.verdict.reason));
    }
    s.emit(slopes)?;
    s.emit(checks)?;
    s.emit(verdicts)
}
