//! Randomized and synthetic batteries behind the `colombeau` experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{cutoff_density_level, trace_time};
use crate::error::Result;
use crate::grid::{DomainSpec, SpaceTimeGrid};
use crate::mollifier::{build_mollifier, moment, mollify, InitialDatum, MollifierSpec};
use crate::nets::{is_negligible, native_scale_element, net_leq, scale_element, FieldNet, NegligibilityPolicy, NetGrids, OrderTest, Outcome, ScalarNet};
use crate::topology::{cauchy_convergence, cauchy_limit, fd_derivative, in_w, multi_binomial, seminorm, MultiIndex, NeighborhoodSpec, PowerLawGenerator};

/// One moment `∫ x^j φ` of a canonical profile against its target.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub q: usize,
    pub j: usize,
    pub value: f64,
    pub target: f64,
}

impl MomentRow {
    pub fn error(&self) -> f64 {
        (self.value - self.target).abs()
    }
}

/// Moments `j = 0..=q` of the canonical profile of each order.
pub fn moment_rows(orders: &[usize]) -> Result<Vec<MomentRow>> {
    let mut rows = Vec::new();
    for &q in orders {
        let p = build_mollifier(MollifierSpec::with_order(q))?;
        for j in 0..=q {
            rows.push(MomentRow { q, j, value: moment(&p, j)?, target: if j == 0 { 1.0 } else { 0.0 } });
        }
    }
    Ok(rows)
}

/// A synthetic net with the negligibility verdict it should receive.
#[derive(Debug, Clone)]
pub struct SyntheticCase {
    pub name: &'static str,
    pub expected: Outcome,
    pub net: ScalarNet,
}

/// Twenty nets of known type: ten negligible under `γ(q) = q`, ten not.
pub fn negligibility_battery(grids: &NetGrids) -> Result<Vec<SyntheticCase>> {
    type Gen = fn(f64, f64) -> f64;
    let cases: [(&'static str, Outcome, Gen); 20] = [
        ("eps^q", Outcome::Yes, |q, e| e.powf(q)),
        ("3 eps^q", Outcome::Yes, |q, e| 3.0 * e.powf(q)),
        ("0.01 eps^q", Outcome::Yes, |q, e| 0.01 * e.powf(q)),
        ("eps^(q+1)", Outcome::Yes, |q, e| e.powf(q + 1.0)),
        ("100 eps^(q+1)", Outcome::Yes, |q, e| 100.0 * e.powf(q + 1.0)),
        ("eps^(q+2)", Outcome::Yes, |q, e| e.powf(q + 2.0)),
        ("eps^(q+0.5)", Outcome::Yes, |q, e| e.powf(q + 0.5)),
        ("eps^(2q)", Outcome::Yes, |q, e| e.powf(2.0 * q)),
        ("eps^q (1+eps)", Outcome::Yes, |q, e| e.powf(q) * (1.0 + e)),
        ("zero", Outcome::Yes, |_, _| 0.0),
        ("eps^-1", Outcome::No, |_, e| 1.0 / e),
        ("eps^0", Outcome::No, |_, _| 1.0),
        ("eps^-2", Outcome::No, |_, e| e.powi(-2)),
        ("5 eps^-0.5", Outcome::No, |_, e| 5.0 / e.sqrt()),
        ("eps^1", Outcome::No, |_, e| e),
        ("eps^2", Outcome::No, |_, e| e * e),
        ("eps^(q/2)", Outcome::No, |q, e| e.powf(0.5 * q)),
        ("eps^max(q-3,0)", Outcome::No, |q, e| e.powf((q - 3.0).max(0.0))),
        ("eps^-q", Outcome::No, |q, e| e.powf(-q)),
        ("1 + eps^q", Outcome::No, |q, e| 1.0 + e.powf(q)),
    ];
    cases
        .iter()
        .map(|&(name, expected, f)| Ok(SyntheticCase { name, expected, net: ScalarNet::from_fn(grids, |q, e, _| f(q as f64, e))? }))
        .collect()
}

/// Negligibility outcome of every case of [`negligibility_battery`].
pub fn classify_battery(cases: &[SyntheticCase], policy: &NegligibilityPolicy) -> Vec<Outcome> {
    cases.iter().map(|c| is_negligible(&c.net, policy).outcome).collect()
}

/// `h(x) = Σ a_i sin(k_i x + θ_i)` with known derivative bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigProfile {
    pub modes: Vec<(f64, f64, f64)>,
}

impl TrigProfile {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let modes = (0..3).map(|_| (rng.random_range(0.2..1.0), rng.random_range(0.5..3.0) * std::f64::consts::PI, rng.random_range(0.0..std::f64::consts::TAU))).collect();
        TrigProfile { modes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.modes.iter().map(|(a, k, t)| a * (k * x + t).sin()).sum()
    }

    pub fn amplitude(&self) -> f64 {
        self.modes.iter().map(|m| m.0).sum()
    }

    pub fn max_wavenumber(&self) -> f64 {
        self.modes.iter().map(|m| m.1).fold(0.0, f64::max)
    }
}

/// Outcome of one seminorm-algebra trial, at its tightest cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraTrial {
    pub kind: &'static str,
    pub trial: usize,
    pub sigma: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Subadditivity is checked to this many units in the last place of
/// `max(rhs, stencil_scale)`.
pub const SUBADDITIVITY_ULPS: f64 = 4.0;

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        f64::from_bits(1)
    } else {
        f64::from_bits(x.to_bits() + 1) - x
    }
}

/// Bound on `Σ_k |c_k u_k| / h^n` for the stencils of order `n`, whose
/// absolute coefficient sums are at most `4^n`. Rounding in a computed
/// difference quotient is a few units in the last place of this scale.
pub fn stencil_scale(n: usize, h: f64, sup_u: f64) -> f64 {
    4f64.powi(n as i32) * sup_u / h.powi(n as i32)
}

/// Bound on `|D_h^n u − u^{(n)}|` for the crate's stencils given
/// `sup|u^{(n+2)}| ≤ m` and `sup|u| ≤ s`: truncation plus rounding.
pub fn fd_error_bound(n: usize, h: f64, m: f64, s: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    h * h * m + 16.0 * f64::EPSILON * 4f64.powi(n as i32) * s / h.powi(n as i32)
}

/// Subadditivity and the Leibniz inequality of `‖·‖_σ` on random pairs of
/// power-law fields `c·(i_q ε)^e·h(x)` over `Ω̄`.
pub fn seminorm_algebra(grids: &NetGrids, domain: &DomainSpec, trials: usize, seed: u64) -> Result<Vec<AlgebraTrial>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let carrier = domain.carrier();
    let nodes = domain.nodes();
    let h = domain.h();
    let mut out = Vec::with_capacity(2 * trials);
    for trial in 0..trials {
        let n = trial % 3;
        let sigma = MultiIndex::new(vec![n]);
        let (pf, pg) = (TrigProfile::random(&mut rng), TrigProfile::random(&mut rng));
        let (ef, eg) = (rng.random_range(-2.0..3.0), rng.random_range(-2.0..3.0));
        let (cf, cg) = (rng.random_range(0.1..10.0), rng.random_range(0.1..10.0));
        let hf: Vec<f64> = nodes.iter().map(|&x| pf.eval(x)).collect();
        let hg: Vec<f64> = nodes.iter().map(|&x| pg.eval(x)).collect();
        let f = FieldNet::separable(grids, &carrier, |_, e, iq| cf * (iq * e).powf(ef), |p| pf.eval(p[0]))?;
        let g = FieldNet::separable(grids, &carrier, |_, e, iq| cg * (iq * e).powf(eg), |p| pg.eval(p[0]))?;

        let sum = f.add(&g)?;
        let (ls, lf, lg) = (seminorm(&sum, &sigma)?, seminorm(&f, &sigma)?, seminorm(&g, &sigma)?);
        let zero = MultiIndex::new(vec![0]);
        let (f0, g0) = (seminorm(&f, &zero)?, seminorm(&g, &zero)?);
        let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
        for c in 0..grids.n_cells() {
            let rhs = lf.values[c] + lg.values[c];
            let tol = SUBADDITIVITY_ULPS * ulp(rhs.max(stencil_scale(n, h, f0.values[c] + g0.values[c])));
            let margin = (ls.values[c] - rhs) / tol;
            if margin > worst.0 {
                worst = (margin, ls.values[c], rhs, tol);
            }
        }
        out.push(AlgebraTrial { kind: "subadditivity", trial, sigma: n, lhs: worst.1, rhs: worst.2, tolerance: worst.3, pass: worst.0 <= 1.0 });

        // Leibniz: sup|D^n(fg)| ≤ Σ C(n,k) sup|D^k f| sup|D^{n−k} g| up to
        // the FD error of every factor.
        let (af, kf) = (pf.amplitude(), pf.max_wavenumber());
        let (ag, kg) = (pg.amplitude(), pg.max_wavenumber());
        let d = |v: &[f64], k: usize| fd_derivative(v, &carrier, &MultiIndex::new(vec![k])).map(|d| d.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        let sup_f = (0..=n).map(|k| d(&hf, k)).collect::<Result<Vec<_>>>()?;
        let sup_g = (0..=n).map(|k| d(&hg, k)).collect::<Result<Vec<_>>>()?;
        let s_f = d(&hf, 0)?;
        let s_g = d(&hg, 0)?;
        let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
        for c in 0..grids.n_cells() {
            let (qi, ei) = grids.split(c);
            let iq = grids.support_diameter[qi] * grids.eps.eps_values[ei];
            let (sf, sg) = (cf * iq.powf(ef), cg * iq.powf(eg));
            let prod = f.cells[c].iter().zip(&g.cells[c]).map(|(a, b)| a * b).collect::<Vec<_>>();
            let lhs = d(&prod, n)?;
            let mut rhs = 0.0;
            let mut tol = fd_error_bound(n, h, sf * sg * af * ag * (kf + kg).powi(n as i32 + 2), sf * sg * s_f * s_g);
            for k in 0..=n {
                let b = multi_binomial(&sigma, &MultiIndex::new(vec![k])) as f64;
                let (nf, ng) = (sf * sup_f[k], sg * sup_g[n - k]);
                let erf = fd_error_bound(k, h, sf * af * kf.powi(k as i32 + 2), sf * s_f);
                let erg = fd_error_bound(n - k, h, sg * ag * kg.powi((n - k) as i32 + 2), sg * s_g);
                rhs += b * nf * ng;
                tol += b * (erf * ng + nf * erg + erf * erg);
            }
            tol += 4.0 * ulp(rhs);
            let margin = lhs - rhs - tol;
            if margin > worst.0 {
                worst = (margin, lhs, rhs, tol);
            }
        }
        out.push(AlgebraTrial { kind: "leibniz", trial, sigma: n, lhs: worst.1, rhs: worst.2, tolerance: worst.3, pass: worst.0 <= 0.0 });
    }
    Ok(out)
}

/// One case of `net_leq(k·α_s², α_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleCase {
    pub k: f64,
    pub r: f64,
    pub s: f64,
    pub expected: bool,
    pub accepted: bool,
}

impl ScaleCase {
    pub fn pass(&self) -> bool {
        self.expected == self.accepted
    }
}

/// `k·α_s² ≤ α_r` over `(k, r) ∈ {1, 10, 100} × {1, 2, 3}` with
/// `s = r/2 ± 0.1`.
pub fn scale_battery(grids: &NetGrids, test: &OrderTest) -> Result<Vec<ScaleCase>> {
    let mut out = Vec::new();
    for k in [1.0, 10.0, 100.0] {
        for r in [1.0, 2.0, 3.0] {
            for (s, expected) in [(r / 2.0 + 0.1, true), (r / 2.0 - 0.1, false)] {
                let lhs = scale_element(s, grids).powf(2.0)?.scale(k)?;
                let accepted = net_leq(&lhs, &scale_element(r, grids), test)?;
                out.push(ScaleCase { k, r, s, expected, accepted });
            }
        }
    }
    Ok(out)
}

/// One trace of a random member of `W_{σ,s}(Q̄)` tested against `W_{σ,r}(Ω̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCase {
    pub s: f64,
    pub trial: usize,
    pub t0: f64,
    pub member: bool,
}

/// Traces at random times of random members of `W_{(σ,σ),s}(Q̄)` for
/// `s = 2r + 0.5` and `s = 2r − 0.5`, tested for `W_{σ,r}(Ω̄)`.
pub fn trace_battery(grids: &NetGrids, grid: &SpaceTimeGrid, sigma: usize, r: f64, trials: usize, seed: u64, test: &OrderTest) -> Result<Vec<TraceCase>> {
    let mut gen = PowerLawGenerator::new(grids.clone(), grid.carrier(), seed);
    let target = NeighborhoodSpec::new(MultiIndex::new(vec![sigma]), r);
    let mut out = Vec::with_capacity(2 * trials);
    for s in [2.0 * r + 0.5, 2.0 * r - 0.5] {
        for trial in 0..trials {
            let f = gen.member(s)?;
            let t0 = gen.rng().random_range(0.0..grid.t_final);
            let tr = trace_time(&f, t0)?;
            out.push(TraceCase { s, trial, t0: tr.t_snapped, member: in_w(&tr.net, &target, test)? });
        }
    }
    Ok(out)
}

/// `l₀` of the cutoff density property for one net and window.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCase {
    pub name: &'static str,
    pub nu: usize,
    pub l_max: usize,
    pub l0: Option<usize>,
}

/// Cutoff density on `Ω̄_ν`, `ν = 1..=nu_max`, for a mollified δ, a
/// mollified `sin(πx)` and a random power-law net.
pub fn cutoff_density_battery(grids: &NetGrids, domain: &DomainSpec, nu_max: usize, l_max: usize, seed: u64) -> Result<Vec<DensityCase>> {
    let profiles = grids.orders.q_values.iter().map(|&q| build_mollifier(MollifierSpec::with_order(q))).collect::<Result<Vec<_>>>()?;
    let from_datum = |d: &InitialDatum| {
        FieldNet::new(
            grids.clone(),
            domain.carrier(),
            (0..grids.n_cells())
                .map(|c| {
                    let (qi, ei) = grids.split(c);
                    mollify(d, &profiles[qi], grids.eps.eps_values[ei], domain)
                })
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let mid = 0.5 * (domain.a + domain.b);
    let delta = from_datum(&InitialDatum::Delta { x0: mid })?;
    let sine = from_datum(&InitialDatum::smooth(|x| (std::f64::consts::PI * x).sin()))?;
    let random = PowerLawGenerator::new(grids.clone(), domain.carrier(), seed).member(0.5)?;
    let mut out = Vec::new();
    for (name, f) in [("delta", &delta), ("sine", &sine), ("power-law", &random)] {
        for nu in 1..=nu_max {
            out.push(DensityCase { name, nu, l_max, l0: cutoff_density_level(f, domain, nu, l_max)? });
        }
    }
    Ok(out)
}

/// `θ` of the Cauchy-limit check for one target neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyLimitCase {
    pub lambda: MultiIndex,
    pub p: f64,
    pub member: Vec<bool>,
    pub theta: Option<usize>,
}

impl CauchyLimitCase {
    /// Membership holds for every `t ≥ θ` and `θ` leaves at least one
    /// checked index.
    pub fn pass(&self) -> bool {
        self.theta.is_some_and(|t| t <= self.member.len())
    }
}

/// Telescopes a synthetic sequence on `Q̄` whose differences
/// `f_{i+1} − f_i` lie in `W_{σ_{i+1}, i+1}` and checks
/// `(lim − f_{ν_{t+1}}) ∈ W_{λ,p}` for `(λ, p) ∈ {((1,1),1), ((2,2),2)}`.
pub fn cauchy_limit_battery(grids: &NetGrids, grid: &SpaceTimeGrid, len: usize, seed: u64, test: &OrderTest) -> Result<Vec<CauchyLimitCase>> {
    let mut gen = PowerLawGenerator::new(grids.clone(), grid.carrier(), seed);
    let mut seq = vec![gen.field(0.0, 1.0)?];
    for i in 1..len {
        let next = seq[i - 1].add(&gen.member((i + 1) as f64)?)?;
        seq.push(next);
    }
    let schedule: Vec<usize> = (1..=len).collect();
    let limit = cauchy_limit(&seq, &schedule)?;
    [(MultiIndex::new(vec![1, 1]), 1.0), (MultiIndex::new(vec![2, 2]), 2.0)]
        .into_iter()
        .map(|(lambda, p)| {
            let conv = cauchy_convergence(&limit, &seq, &schedule, &NeighborhoodSpec::new(lambda.clone(), p), test)?;
            Ok(CauchyLimitCase { lambda, p, member: conv.member, theta: conv.theta })
        })
        .collect()
}

/// `α_{−L}·β_b ≤ α_s` on `Q̄`, where `β_b` is the scale element of the
/// spatial index and `α` is native to the cylinder.
pub fn exponent_threshold_holds(grids: &NetGrids, grid: &SpaceTimeGrid, l: f64, s: f64, b: f64, test: &OrderTest) -> Result<bool> {
    let c = grid.carrier();
    let lhs = native_scale_element(-l, &c, grids).mul(&scale_element(b, grids))?;
    net_leq(&lhs, &native_scale_element(s, &c, grids), test)
}
