use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge on [{a}, {b}] (depth limit reached)")]
    QuadratureNonConvergence { a: f64, b: f64 },

    #[error("moment system is singular for order q = {0}")]
    SingularMomentSystem(usize),

    #[error("datum support [{lo}, {hi}] escapes the domain [{a}, {b}]")]
    SupportEscapesDomain { lo: f64, hi: f64, a: f64, b: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("derivative order {order} on axis {axis} exceeds the budget {budget}")]
    DerivativeBudget { axis: usize, order: usize, budget: usize },

    #[error("fit needs at least 2 usable points, got {0}")]
    InsufficientFitPoints(usize),

    #[error("schedule must be strictly increasing: {0:?}")]
    ScheduleNotIncreasing(Vec<usize>),

    #[error("time {t0} lies outside [0, {t_final}]")]
    TimeOutOfRange { t0: f64, t_final: f64 },

    #[error("cutoff gap at level {level} spans {cells:.2} cells, need at least {required}")]
    UnresolvableCutoffGap { level: usize, cells: f64, required: f64 },

    #[error("Newton iteration diverged at step {step} after {iters} iterations")]
    NewtonDivergence { step: usize, iters: usize },

    #[error("non-finite value produced at step {0}")]
    NonFinite(usize),

    #[error("coefficient a0 is negative ({value}) at x = {x}, t = {t}")]
    NegativeCoefficient { x: f64, t: f64, value: f64 },

    #[error("assembly refused: {0}")]
    AssemblyRefused(String),

    #[error("configuration error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
