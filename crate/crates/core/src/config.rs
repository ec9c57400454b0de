//! Plain-text run configuration: `key = value` lines grouped under
//! `[section]` headers, `#` comments.
//!
//! ```text
//! experiment = ibvp-run
//! seed = 7
//!
//! [grid]
//! nx = 201
//! nt = 201
//! T = 0.1
//!
//! [nets]
//! eps_max = 2^-3
//! eps_min = 2^-12
//! eps_count = 10
//! q_max = 6
//!
//! [datum]
//! kind = delta
//! x0 = 0.5
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mollifier::InitialDatum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    MollifierCheck,
    NetFit,
    TopologyAxioms,
    SolveClassical,
    IbvpRun,
    IbvpCauchy,
    IbvpUnique,
    FullSuite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::MollifierCheck,
        Experiment::NetFit,
        Experiment::TopologyAxioms,
        Experiment::SolveClassical,
        Experiment::IbvpRun,
        Experiment::IbvpCauchy,
        Experiment::IbvpUnique,
        Experiment::FullSuite,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::MollifierCheck => "mollifier-check",
            Experiment::NetFit => "net-fit",
            Experiment::TopologyAxioms => "topology-axioms",
            Experiment::SolveClassical => "solve-classical",
            Experiment::IbvpRun => "ibvp-run",
            Experiment::IbvpCauchy => "ibvp-cauchy",
            Experiment::IbvpUnique => "ibvp-unique",
            Experiment::FullSuite => "full-suite",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL.iter().copied().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial data named in a configuration file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DatumSpec {
    Delta { x0: f64 },
    DeltaPrime { x0: f64 },
    Heaviside { x0: f64 },
    Sine { amplitude: f64 },
    Zero,
    BoundaryDecaying { power: f64 },
}

impl DatumSpec {
    pub fn to_datum(&self) -> InitialDatum {
        match *self {
            DatumSpec::Delta { x0 } => InitialDatum::Delta { x0 },
            DatumSpec::DeltaPrime { x0 } => InitialDatum::DeltaPrime { x0 },
            DatumSpec::Heaviside { x0 } => InitialDatum::Heaviside { x0 },
            DatumSpec::Sine { amplitude } => InitialDatum::smooth(move |x| amplitude * (std::f64::consts::PI * x).sin()),
            DatumSpec::Zero => InitialDatum::smooth(|_| 0.0),
            DatumSpec::BoundaryDecaying { power } => InitialDatum::BoundaryDecaying { power },
        }
    }

    pub fn label(&self) -> String {
        match self {
            DatumSpec::Delta { x0 } => format!("delta({x0})"),
            DatumSpec::DeltaPrime { x0 } => format!("delta_prime({x0})"),
            DatumSpec::Heaviside { x0 } => format!("heaviside({x0})"),
            DatumSpec::Sine { amplitude } => format!("{amplitude}·sin(πx)"),
            DatumSpec::Zero => "zero".into(),
            DatumSpec::BoundaryDecaying { power } => format!("eps^{power}·4x(1−x)"),
        }
    }
}

/// Parameters of every experiment; unset keys keep these defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
    // [grid]
    pub a: f64,
    pub b: f64,
    pub nx: usize,
    pub nt: usize,
    pub t_final: f64,
    pub substeps: usize,
    // [nets]
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_count: usize,
    pub fit_window: usize,
    pub q_max: usize,
    // [datum]
    pub datum: DatumSpec,
    // [classical]
    pub classical_nx: usize,
    pub classical_dt: f64,
    // [cauchy]
    pub cauchy_p_max: usize,
    pub cauchy_nx: usize,
    pub cauchy_nt: usize,
    pub cauchy_substeps: usize,
    pub cauchy_datum: DatumSpec,
    // [unique]
    pub unique_q_min: usize,
    pub unique_q_max: usize,
    pub unique_offset: i32,
    // [topology]
    pub trials: usize,
    pub trace_trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiment: None,
            output_dir: None,
            seed: 7,
            jobs: None,
            a: 0.0,
            b: 1.0,
            nx: 201,
            nt: 201,
            t_final: 0.1,
            substeps: 10,
            eps_min: 2f64.powi(-12),
            eps_max: 2f64.powi(-3),
            eps_count: 10,
            fit_window: 5,
            q_max: 6,
            datum: DatumSpec::Delta { x0: 0.5 },
            classical_nx: 200,
            classical_dt: 1e-4,
            cauchy_p_max: 7,
            cauchy_nx: 1441,
            cauchy_nt: 101,
            cauchy_substeps: 20,
            cauchy_datum: DatumSpec::BoundaryDecaying { power: -0.5 },
            unique_q_min: 2,
            unique_q_max: 6,
            unique_offset: 3,
            trials: 100,
            trace_trials: 50,
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Reads a float, also accepting powers of two written `2^k`.
fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    let x = if let Some(k) = v.strip_prefix("2^") {
        k.parse::<i32>().map(|k| 2f64.powi(k)).ok()
    } else {
        v.parse::<f64>().ok()
    };
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(err(line, format!("`{key}` expects a number, got `{v}`"))),
    }
}

fn parse_int<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse::<T>().map_err(|_| err(line, format!("`{key}` expects an integer, got `{v}`")))
}

struct DatumKeys {
    kind: Option<(usize, String)>,
    x0: f64,
    amplitude: f64,
    power: f64,
}

impl DatumKeys {
    fn new(power: f64) -> Self {
        DatumKeys { kind: None, x0: 0.5, amplitude: 1.0, power }
    }

    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<bool> {
        match key {
            "kind" => self.kind = Some((line, v.to_string())),
            "x0" => self.x0 = parse_f64(line, key, v)?,
            "amplitude" => self.amplitude = parse_f64(line, key, v)?,
            "power" => self.power = parse_f64(line, key, v)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn build(&self, default: DatumSpec) -> Result<DatumSpec> {
        let Some((line, kind)) = &self.kind else {
            return Ok(match default {
                DatumSpec::Delta { .. } => DatumSpec::Delta { x0: self.x0 },
                DatumSpec::BoundaryDecaying { .. } => DatumSpec::BoundaryDecaying { power: self.power },
                d => d,
            });
        };
        Ok(match kind.as_str() {
            "delta" => DatumSpec::Delta { x0: self.x0 },
            "delta_prime" => DatumSpec::DeltaPrime { x0: self.x0 },
            "heaviside" => DatumSpec::Heaviside { x0: self.x0 },
            "sine" => DatumSpec::Sine { amplitude: self.amplitude },
            "zero" => DatumSpec::Zero,
            "boundary_decaying" => DatumSpec::BoundaryDecaying { power: self.power },
            other => return Err(err(*line, format!("unknown datum kind `{other}`"))),
        })
    }
}

impl RunConfig {
    /// Parses a configuration file body. A file with no keys is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        let mut section = String::new();
        let mut datum = DatumKeys::new(-0.5);
        let mut cauchy_datum = DatumKeys::new(-0.5);
        let mut keys = 0;
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err(line, "unterminated section header"))?.trim();
                if !["grid", "nets", "datum", "classical", "cauchy", "cauchy.datum", "unique", "topology", "output"].contains(&name) {
                    return Err(err(line, format!("unknown section `[{name}]`")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| err(line, format!("expected `key = value`, got `{body}`")))?;
            let (key, v) = (key.trim(), value.trim());
            if v.is_empty() {
                return Err(err(line, format!("`{key}` has no value")));
            }
            keys += 1;
            let known = match (section.as_str(), key) {
                ("", "experiment") => {
                    c.experiment = Some(v.parse().map_err(|m: String| err(line, m))?);
                    true
                }
                ("" | "output", "output_dir" | "dir") => {
                    c.output_dir = Some(PathBuf::from(v));
                    true
                }
                ("", "seed") => {
                    c.seed = parse_int(line, key, v)?;
                    true
                }
                ("", "jobs") => {
                    c.jobs = Some(parse_int(line, key, v)?);
                    true
                }
                ("grid", "a") => {
                    c.a = parse_f64(line, key, v)?;
                    true
                }
                ("grid", "b") => {
                    c.b = parse_f64(line, key, v)?;
                    true
                }
                ("grid", "nx") => {
                    c.nx = parse_int(line, key, v)?;
                    true
                }
                ("grid", "nt") => {
                    c.nt = parse_int(line, key, v)?;
                    true
                }
                ("grid", "T" | "t_final") => {
                    c.t_final = parse_f64(line, key, v)?;
                    true
                }
                ("grid", "substeps") => {
                    c.substeps = parse_int(line, key, v)?;
                    true
                }
                ("nets", "eps_min") => {
                    c.eps_min = parse_f64(line, key, v)?;
                    true
                }
                ("nets", "eps_max") => {
                    c.eps_max = parse_f64(line, key, v)?;
                    true
                }
                ("nets", "eps_count") => {
                    c.eps_count = parse_int(line, key, v)?;
                    true
                }
                ("nets", "fit_window") => {
                    c.fit_window = parse_int(line, key, v)?;
                    true
                }
                ("nets", "q_max") => {
                    c.q_max = parse_int(line, key, v)?;
                    true
                }
                ("datum", k) => datum.set(line, k, v)?,
                ("cauchy.datum", k) => cauchy_datum.set(line, k, v)?,
                ("classical", "nx") => {
                    c.classical_nx = parse_int(line, key, v)?;
                    true
                }
                ("classical", "dt") => {
                    c.classical_dt = parse_f64(line, key, v)?;
                    true
                }
                ("cauchy", "p_max") => {
                    c.cauchy_p_max = parse_int(line, key, v)?;
                    true
                }
                ("cauchy", "nx") => {
                    c.cauchy_nx = parse_int(line, key, v)?;
                    true
                }
                ("cauchy", "nt") => {
                    c.cauchy_nt = parse_int(line, key, v)?;
                    true
                }
                ("cauchy", "substeps") => {
                    c.cauchy_substeps = parse_int(line, key, v)?;
                    true
                }
                ("unique", "q_min") => {
                    c.unique_q_min = parse_int(line, key, v)?;
                    true
                }
                ("unique", "q_max") => {
                    c.unique_q_max = parse_int(line, key, v)?;
                    true
                }
                ("unique", "offset") => {
                    c.unique_offset = parse_int(line, key, v)?;
                    true
                }
                ("topology", "trials") => {
                    c.trials = parse_int(line, key, v)?;
                    true
                }
                ("topology", "trace_trials") => {
                    c.trace_trials = parse_int(line, key, v)?;
                    true
                }
                _ => false,
            };
            if !known {
                let where_ = if section.is_empty() { String::new() } else { format!(" in [{section}]") };
                return Err(err(line, format!("unknown key `{key}`{where_}")));
            }
        }
        if keys == 0 {
            return Err(err(last_line, "configuration sets no keys"));
        }
        c.datum = datum.build(DatumSpec::Delta { x0: 0.5 })?;
        c.cauchy_datum = cauchy_datum.build(DatumSpec::BoundaryDecaying { power: -0.5 })?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config { line: 0, message: format!("cannot read {}: {e}", path.display()) })?;
        RunConfig::parse(&text)
    }

    /// Range checks that do not depend on a line number.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(err(0, m));
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_max && self.eps_max <= 1.0) {
            return bad(format!("need 0 < eps_min < eps_max ≤ 1, got eps_min = {}, eps_max = {}", self.eps_min, self.eps_max));
        }
        if self.q_max > 8 {
            return bad(format!("q_max = {} exceeds 8", self.q_max));
        }
        if self.fit_window < 2 || self.eps_count < self.fit_window {
            return bad(format!("need 2 ≤ fit_window ≤ eps_count, got {} and {}", self.fit_window, self.eps_count));
        }
        if !(self.a < self.b) {
            return bad(format!("domain endpoints must satisfy a < b, got [{}, {}]", self.a, self.b));
        }
        if self.nx < 16 || self.nt < 16 || self.classical_nx < 16 || self.cauchy_nx < 16 || self.cauchy_nt < 16 {
            return bad("every grid needs at least 16 nodes per axis".into());
        }
        if !(self.t_final > 0.0) || self.substeps == 0 || self.cauchy_substeps == 0 || !(self.classical_dt > 0.0) {
            return bad("T, dt and substeps must be positive".into());
        }
        if self.cauchy_p_max < 4 {
            return bad(format!("cauchy p_max = {} is below 4", self.cauchy_p_max));
        }
        if self.unique_q_min > self.unique_q_max {
            return bad("unique q_min exceeds q_max".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_a_line_numbered_error() {
        for text in ["", "   \n# only a comment\n"] {
            match RunConfig::parse(text) {
                Err(Error::Config { line, .. }) => assert!(line >= 1),
                other => panic!("expected a config error, got {other:?}"),
            }
        }
    }

    #[test]
    fn parses_sections_and_powers_of_two() {
        let c = RunConfig::parse("experiment = net-fit\n[nets]\neps_min = 2^-10 # comment\nq_max=4\n[datum]\nkind = heaviside\nx0 = 0.25\n").unwrap();
        assert_eq!(c.experiment, Some(Experiment::NetFit));
        assert_eq!(c.eps_min, 2f64.powi(-10));
        assert_eq!(c.q_max, 4);
        assert_eq!(c.datum, DatumSpec::Heaviside { x0: 0.25 });
    }

    #[test]
    fn reports_offending_line() {
        let e = RunConfig::parse("seed = 1\n[grid]\nnx = many\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, .. }), "{e:?}");
        let e = RunConfig::parse("seed = 1\n\n[nets]\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 4, .. }), "{e:?}");
        assert!(RunConfig::parse("[nets]\nq_max = 9\n").is_err());
        assert!(RunConfig::parse("[nets]\neps_max = 2\n").is_err());
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
    }
}
