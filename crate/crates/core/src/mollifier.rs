//! Test functions of moment order `q`, their ε-scalings and their
//! convolutions against initial data.
//!
//! A profile is `φ = p·β` where `β(x) = exp(−1/(1 − (x/R)²))` is the standard
//! bump on `(−R, R)` and `p` is the polynomial of degree `q` that makes
//! `∫ x^j φ = δ_{0j}` for `0 ≤ j ≤ q`. The coefficients come from the
//! Hankel system `M c = e₀` with `M_{jk} = ∫ x^{j+k} β`.
//!
//! One canonical profile is built per order; nets are indexed by `q`, not by
//! individual test functions.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::DomainSpec;
use crate::quadrature::adaptive_simpson;

/// Absolute tolerance used for the entries of the moment matrix. The
/// polynomial coefficients amplify entry errors, so this is tighter than the
/// profile's own quadrature tolerance.
const MOMENT_MATRIX_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierSpec {
    pub q: usize,
    pub support_radius: f64,
    pub quadrature_tolerance: f64,
}

impl MollifierSpec {
    pub fn new(q: usize, support_radius: f64, quadrature_tolerance: f64) -> Result<Self> {
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(Error::InvalidParameter(format!("support radius must be positive, got {support_radius}")));
        }
        if !(quadrature_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!("quadrature tolerance must be positive, got {quadrature_tolerance}")));
        }
        Ok(MollifierSpec { q, support_radius, quadrature_tolerance })
    }

    /// Order `q` on `[−1, 1]` with tolerance `1e−10`.
    pub fn with_order(q: usize) -> Self {
        MollifierSpec { q, support_radius: 1.0, quadrature_tolerance: 1e-10 }
    }
}

/// Standard smooth bump on `(−r, r)`, not normalized.
#[inline]
pub fn bump(x: f64, r: f64) -> f64 {
    let z = x / r;
    let d = 1.0 - z * z;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

#[inline]
fn bump_derivative(x: f64, r: f64) -> f64 {
    let z = x / r;
    let d = 1.0 - z * z;
    if d <= 0.0 {
        0.0
    } else {
        // d/dx exp(−1/d) = exp(−1/d) · (−2 z / r) / d²
        (-1.0 / d).exp() * (-2.0 * z / r) / (d * d)
    }
}

/// A built test function `φ ∈ A_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifierProfile {
    pub spec: MollifierSpec,
    /// Coefficients of `p`, lowest degree first.
    pub polynomial_coeffs: Vec<f64>,
}

impl MollifierProfile {
    pub fn order(&self) -> usize {
        self.spec.q
    }

    pub fn radius(&self) -> f64 {
        self.spec.support_radius
    }

    /// `i(φ) = diam supp φ`.
    pub fn support_diameter(&self) -> f64 {
        2.0 * self.spec.support_radius
    }

    fn poly(&self, x: f64) -> f64 {
        self.polynomial_coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn poly_derivative(&self, x: f64) -> f64 {
        self.polynomial_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }

    /// `φ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let r = self.spec.support_radius;
        if x.abs() >= r {
            return 0.0;
        }
        self.poly(x) * bump(x, r)
    }

    /// `φ'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        let r = self.spec.support_radius;
        if x.abs() >= r {
            return 0.0;
        }
        self.poly_derivative(x) * bump(x, r) + self.poly(x) * bump_derivative(x, r)
    }

    /// `max |φ|`, sampled on 4001 points.
    pub fn max_abs(&self) -> f64 {
        let r = self.spec.support_radius;
        (0..=4000).map(|k| self.eval(-r + 2.0 * r * k as f64 / 4000.0).abs()).fold(0.0, f64::max)
    }

    /// `∫_{−R}^{z} φ`, clamped to 0 and 1 outside the support.
    pub fn cumulative(&self, z: f64) -> Result<f64> {
        let r = self.spec.support_radius;
        if z <= -r {
            return Ok(0.0);
        }
        if z >= r {
            return Ok(1.0);
        }
        adaptive_simpson(|x| self.eval(x), -r, z, self.spec.quadrature_tolerance)
    }
}

/// Builds the canonical profile of order `spec.q`.
pub fn build_mollifier(spec: MollifierSpec) -> Result<MollifierProfile> {
    let spec = MollifierSpec::new(spec.q, spec.support_radius, spec.quadrature_tolerance)?;
    let r = spec.support_radius;
    let n = spec.q + 1;
    // β is even, so odd moments vanish identically and even ones are twice
    // the half-line integral.
    let mut raw = vec![0.0; 2 * n - 1];
    for (k, slot) in raw.iter_mut().enumerate() {
        if k % 2 == 0 {
            let half = adaptive_simpson(|x| x.powi(k as i32) * bump(x, r), 0.0, r, MOMENT_MATRIX_TOL * r.powi(k as i32 + 1))?;
            *slot = 2.0 * half;
        }
    }
    let m = DMatrix::from_fn(n, n, |j, k| raw[j + k]);
    let mut e0 = DVector::zeros(n);
    e0[0] = 1.0;
    let c = m.lu().solve(&e0).ok_or(Error::SingularMomentSystem(spec.q))?;
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMomentSystem(spec.q));
    }
    Ok(MollifierProfile { spec, polynomial_coeffs: c.iter().copied().collect() })
}

/// `∫ x^j φ(x) dx`.
pub fn moment(profile: &MollifierProfile, j: usize) -> Result<f64> {
    let r = profile.radius();
    adaptive_simpson(|x| x.powi(j as i32) * profile.eval(x), -r, r, profile.spec.quadrature_tolerance)
}

/// `φ_ε(x) = ε^{−1} φ(x/ε)`.
#[inline]
pub fn scaled_eval(profile: &MollifierProfile, eps: f64, x: f64) -> f64 {
    profile.eval(x / eps) / eps
}

/// `φ_ε'(x) = ε^{−2} φ'(x/ε)`.
#[inline]
pub fn scaled_derivative(profile: &MollifierProfile, eps: f64, x: f64) -> f64 {
    profile.derivative(x / eps) / (eps * eps)
}

pub type SmoothFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Distributional initial data that can be regularized by a profile.
#[derive(Clone)]
pub enum InitialDatum {
    /// Dirac measure at `x0`.
    Delta { x0: f64 },
    /// Derivative of the Dirac measure at `x0`.
    DeltaPrime { x0: f64 },
    /// Indicator of `[x0, ∞)`.
    Heaviside { x0: f64 },
    /// A smooth function defined on all of ℝ.
    Smooth(SmoothFn),
    /// `ε^power · 4(x − a)(b − x)/(b − a)²`: an ε-dependent amplitude on a
    /// profile vanishing at ∂Ω.
    BoundaryDecaying { power: f64 },
}

impl InitialDatum {
    pub fn smooth<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        InitialDatum::Smooth(Arc::new(f))
    }

    /// True for data whose support is a single point.
    pub fn is_point_supported(&self) -> bool {
        matches!(self, InitialDatum::Delta { .. } | InitialDatum::DeltaPrime { .. })
    }

    /// Point-supported and Heaviside data locate a point strictly inside Ω.
    pub fn location(&self) -> Option<f64> {
        match self {
            InitialDatum::Delta { x0 } | InitialDatum::DeltaPrime { x0 } | InitialDatum::Heaviside { x0 } => Some(*x0),
            _ => None,
        }
    }

    /// Unregularized values on the grid, where that makes sense pointwise.
    pub fn sample(&self, eps: f64, domain: &DomainSpec) -> Option<Vec<f64>> {
        let xs = domain.nodes();
        match self {
            InitialDatum::Smooth(g) => Some(xs.iter().map(|&x| g(x)).collect()),
            InitialDatum::BoundaryDecaying { power } => {
                Some(xs.iter().map(|&x| eps.powf(*power) * boundary_profile(x, domain)).collect())
            }
            InitialDatum::Heaviside { x0 } => Some(xs.iter().map(|&x| if x >= *x0 { 1.0 } else { 0.0 }).collect()),
            _ => None,
        }
    }
}

impl fmt::Debug for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialDatum::Delta { x0 } => write!(f, "Delta({x0})"),
            InitialDatum::DeltaPrime { x0 } => write!(f, "DeltaPrime({x0})"),
            InitialDatum::Heaviside { x0 } => write!(f, "Heaviside({x0})"),
            InitialDatum::Smooth(_) => write!(f, "Smooth(<fn>)"),
            InitialDatum::BoundaryDecaying { power } => write!(f, "BoundaryDecaying(power={power})"),
        }
    }
}

#[inline]
fn boundary_profile(x: f64, domain: &DomainSpec) -> f64 {
    let l = domain.length();
    4.0 * (x - domain.a) * (domain.b - x) / (l * l)
}

/// `(u₀ ∗ φ_ε)` sampled on the grid of `domain`.
pub fn mollify(datum: &InitialDatum, profile: &MollifierProfile, eps: f64, domain: &DomainSpec) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("ε must be positive, got {eps}")));
    }
    let r = profile.radius();
    let xs = domain.nodes();
    let tol = profile.spec.quadrature_tolerance;
    if let Some(x0) = datum.location() {
        let (lo, hi) = if datum.is_point_supported() { (x0 - eps * r, x0 + eps * r) } else { (x0, x0) };
        if !(lo > domain.a && hi < domain.b) {
            return Err(Error::SupportEscapesDomain { lo, hi, a: domain.a, b: domain.b });
        }
    }
    match datum {
        InitialDatum::Delta { x0 } => Ok(xs.iter().map(|&x| scaled_eval(profile, eps, x - x0)).collect()),
        InitialDatum::DeltaPrime { x0 } => Ok(xs.iter().map(|&x| scaled_derivative(profile, eps, x - x0)).collect()),
        InitialDatum::Heaviside { x0 } => xs.iter().map(|&x| profile.cumulative((x - x0) / eps)).collect(),
        InitialDatum::Smooth(g) => xs
            .iter()
            .map(|&x| adaptive_simpson(|y| g(x - eps * y) * profile.eval(y), -r, r, tol))
            .collect(),
        InitialDatum::BoundaryDecaying { power } => {
            let amp = eps.powf(*power);
            xs.iter()
                .map(|&x| adaptive_simpson(|y| boundary_profile(x - eps * y, domain) * profile.eval(y), -r, r, tol).map(|v| amp * v))
                .collect()
        }
    }
}
