//! Zonal profiles `g` on `[-1, 1]` with exact derivatives.
//!
//! A profile describes the support function `h(u) = g(u·ē)` of a body of
//! revolution about `ē`, or a zonal generating function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::legendre::{binomial, derivative_factor, legendre_values};
use crate::harmonics::{zonal_multipliers, QuadratureRule};

/// Dense uniform scan used for convexity/positivity certificates.
pub const SCAN_POINTS: usize = 4001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `g = Σ c_k P_k^dim(t)`.
    Legendre { dim: usize, coeffs: Vec<f64> },
    /// Polynomial pieces in monomials of `t`; piece `p` covers
    /// `[breaks[p-1], breaks[p])` with `breaks` interior and increasing.
    Piecewise { breaks: Vec<f64>, pieces: Vec<Vec<f64>> },
    /// Ellipsoid of revolution: semi-axis `axial` along `ē`, `equatorial` across.
    Ellipsoid { axial: f64, equatorial: f64 },
}

/// Declared regularity of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "order", rename_all = "snake_case")]
pub enum Smoothness {
    /// Polynomial of the given degree.
    BandLimited(usize),
    Analytic,
    /// `C^m` with a jump in the derivative of order `m + 1`.
    Finite(usize),
}

impl Profile {
    /// Constant profile `r` (ball of radius `r`).
    pub fn ball(radius: f64) -> Self {
        Profile::Piecewise {
            breaks: vec![],
            pieces: vec![vec![radius]],
        }
    }

    /// `|t|/2`, the generating function of projection bodies.
    pub fn cosine() -> Self {
        Profile::Piecewise {
            breaks: vec![0.0],
            pieces: vec![vec![0.0, -0.5], vec![0.0, 0.5]],
        }
    }

    /// `1 + c·max(0, |t| - a)^3`: a `C^2` bump with jumps in `g'''` at `±a`.
    pub fn spline_bump(amplitude: f64, knot: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&knot) {
            return Err(Error::Domain(format!("knot {knot} must lie in [0, 1)")));
        }
        let (c, a) = (amplitude, knot);
        // c(t-a)^3 and -c(t+a)^3 in monomials.
        let right = vec![1.0 - c * a * a * a, 3.0 * c * a * a, -3.0 * c * a, c];
        let left = vec![1.0 - c * a * a * a, -3.0 * c * a * a, -3.0 * c * a, -c];
        Ok(Profile::Piecewise {
            breaks: vec![-a, a],
            pieces: vec![left, vec![1.0], right],
        })
    }

    pub fn legendre(dim: usize, coeffs: Vec<f64>) -> Self {
        Profile::Legendre { dim, coeffs }
    }

    pub fn ellipsoid(axial: f64, equatorial: f64) -> Result<Self> {
        if !(axial > 0.0 && equatorial > 0.0) {
            return Err(Error::Domain("ellipsoid semi-axes must be positive".into()));
        }
        Ok(Profile::Ellipsoid { axial, equatorial })
    }

    /// Checks structural consistency.
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Legendre { dim, coeffs } => {
                if *dim < 2 || coeffs.is_empty() {
                    return Err(Error::Domain("Legendre profile needs dim >= 2 and coefficients".into()));
                }
            }
            Profile::Piecewise { breaks, pieces } => {
                if pieces.len() != breaks.len() + 1 || pieces.iter().any(|p| p.is_empty()) {
                    return Err(Error::Domain("piecewise profile needs breaks + 1 non-empty pieces".into()));
                }
                if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks.iter().any(|b| b.abs() >= 1.0) {
                    return Err(Error::Domain("breakpoints must be increasing and inside (-1, 1)".into()));
                }
            }
            Profile::Ellipsoid { axial, equatorial } => {
                if !(*axial > 0.0 && *equatorial > 0.0) {
                    return Err(Error::Domain("ellipsoid semi-axes must be positive".into()));
                }
            }
        }
        Ok(())
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Piecewise { breaks, .. } => breaks.clone(),
            _ => vec![],
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    /// `g^{(order)}(t)`; right-continuous at breakpoints.
    pub fn derivative(&self, t: f64, order: usize) -> f64 {
        match self {
            Profile::Legendre { dim, coeffs } => legendre_derivative(*dim, coeffs, t, order),
            Profile::Piecewise { breaks, pieces } => {
                let p = breaks.iter().take_while(|b| t >= **b).count();
                poly_derivative(&pieces[p], t, order)
            }
            Profile::Ellipsoid { axial, equatorial } => {
                ellipsoid_derivatives(*axial, *equatorial, t, order)[order]
            }
        }
    }

    /// One-sided derivative from the left (differs from [`Self::derivative`] only at breakpoints).
    pub fn derivative_left(&self, t: f64, order: usize) -> f64 {
        match self {
            Profile::Piecewise { breaks, pieces } => {
                let p = breaks.iter().take_while(|b| t > **b).count();
                poly_derivative(&pieces[p], t, order)
            }
            _ => self.derivative(t, order),
        }
    }

    /// Polynomial degree if the profile is a single polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Profile::Legendre { coeffs, .. } => Some(trimmed_len(coeffs).saturating_sub(1)),
            Profile::Piecewise { breaks, pieces } if breaks.is_empty() => {
                Some(trimmed_len(&pieces[0]).saturating_sub(1))
            }
            _ => None,
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            Profile::Ellipsoid { .. } => Smoothness::Analytic,
            Profile::Legendre { .. } => Smoothness::BandLimited(self.polynomial_degree().unwrap_or(0)),
            Profile::Piecewise { breaks, pieces } => {
                let maxdeg = pieces.iter().map(|p| p.len()).max().unwrap_or(1);
                let scale = pieces
                    .iter()
                    .flat_map(|p| p.iter())
                    .fold(1.0f64, |m, c| m.max(c.abs()));
                for d in 0..=maxdeg {
                    let jump = breaks
                        .iter()
                        .any(|b| (self.derivative(*b, d) - self.derivative_left(*b, d)).abs() > 1e-12 * scale);
                    if jump {
                        return if d == 0 { Smoothness::Finite(0) } else { Smoothness::Finite(d - 1) };
                    }
                }
                Smoothness::BandLimited(self.polynomial_degree().unwrap_or(maxdeg))
            }
        }
    }

    /// Eigenvalues `(ν, μ)` of the restricted Hessian of `h(u) = g(u·ē)`
    /// at `t = u·ē`: `μ = g - t g'` (multiplicity `n-2`), `ν = μ + (1-t²) g''`.
    pub fn hessian_eigenvalues(&self, t: f64) -> (f64, f64) {
        hessian_pair(self.value(t), self.derivative(t, 1), self.derivative(t, 2), t)
    }

    fn hessian_eigenvalues_left(&self, t: f64) -> (f64, f64) {
        hessian_pair(
            self.derivative_left(t, 0),
            self.derivative_left(t, 1),
            self.derivative_left(t, 2),
            t,
        )
    }

    /// Points at which convexity and positivity are certified: a dense uniform
    /// grid, the endpoints, and the breakpoints.
    pub fn scan_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = (0..SCAN_POINTS)
            .map(|i| -1.0 + 2.0 * i as f64 / (SCAN_POINTS - 1) as f64)
            .collect();
        pts.extend(self.breakpoints());
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// Most negative Hessian eigenvalue over `scan_points` and the given extra
    /// points, with its location; one-sided values are used at breakpoints.
    pub fn min_eigenvalue(&self, extra: &[f64]) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        let mut consider = |t: f64, (nu, mu): (f64, f64)| {
            let e = nu.min(mu);
            if e < best.0 {
                best = (e, t);
            }
        };
        for &t in self.scan_points().iter().chain(extra) {
            consider(t, self.hessian_eigenvalues(t));
        }
        for t in self.breakpoints() {
            consider(t, self.hessian_eigenvalues_left(t));
        }
        best
    }

    /// Largest Hessian eigenvalue magnitude over the scan.
    pub fn max_eigenvalue(&self) -> f64 {
        self.scan_points()
            .iter()
            .map(|t| {
                let (nu, mu) = self.hessian_eigenvalues(*t);
                nu.abs().max(mu.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Minimum of `g` over the scan.
    pub fn min_value(&self) -> (f64, f64) {
        self.scan_points()
            .iter()
            .map(|t| (self.value(*t), *t))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    /// Multipliers `a_0..a_kmax` in dimension `n`, integrated piece by piece so
    /// kinks do not spoil convergence.
    pub fn multipliers(&self, n: usize, kmax: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let extra = match self {
            Profile::Legendre { coeffs, .. } => coeffs.len(),
            Profile::Piecewise { pieces, .. } => pieces.iter().map(|p| p.len()).max().unwrap_or(1),
            Profile::Ellipsoid { .. } => 64,
        };
        let points = kmax / 2 + extra / 2 + 64;
        let rule = QuadratureRule::gegenbauer_composite(n, &self.breakpoints(), points)?;
        Ok(zonal_multipliers(n, |t| self.value(t), kmax, &rule))
    }

    /// Multipliers of `g^{(order)}` in dimension `n`, by quadrature.
    pub fn derivative_multipliers(&self, n: usize, order: usize, kmax: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let extra = match self {
            Profile::Legendre { coeffs, .. } => coeffs.len(),
            Profile::Piecewise { pieces, .. } => pieces.iter().map(|p| p.len()).max().unwrap_or(1),
            Profile::Ellipsoid { .. } => 64,
        };
        let points = kmax / 2 + extra / 2 + 64;
        let rule = QuadratureRule::gegenbauer_composite(n, &self.breakpoints(), points)?;
        Ok(zonal_multipliers(n, |t| self.derivative(t, order), kmax, &rule))
    }
}

/// `(ν, μ)` from `g, g', g''` at `t`.
pub fn hessian_pair(g: f64, g1: f64, g2: f64, t: f64) -> (f64, f64) {
    let mu = g - t * g1;
    (mu + (1.0 - t * t) * g2, mu)
}

fn trimmed_len(c: &[f64]) -> usize {
    c.iter().rposition(|v| *v != 0.0).map_or(1, |i| i + 1)
}

fn legendre_derivative(dim: usize, coeffs: &[f64], t: f64, order: usize) -> f64 {
    let kmax = coeffs.len() - 1;
    if order > kmax {
        return 0.0;
    }
    let shifted = legendre_values(dim + 2 * order, kmax - order, t);
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(k, c)| c * derivative_factor(dim, k, order) * shifted[k - order])
        .sum()
}

fn poly_derivative(c: &[f64], t: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for i in (order..c.len()).rev() {
        let falling: f64 = (0..order).map(|s| (i - s) as f64).product();
        acc = acc * t + c[i] * falling;
    }
    acc
}

/// Derivatives `g, g', ..., g^{(order)}` of `sqrt(B² + (A² - B²) t²)` via
/// `2 g g^{(d)} = q^{(d)} - Σ_{k=1}^{d-1} C(d,k) g^{(k)} g^{(d-k)}`.
fn ellipsoid_derivatives(a: f64, b: f64, t: f64, order: usize) -> Vec<f64> {
    let c = a * a - b * b;
    let q = [b * b + c * t * t, 2.0 * c * t, 2.0 * c];
    let mut g = vec![q[0].sqrt()];
    for d in 1..=order {
        let qd = if d < 3 { q[d] } else { 0.0 };
        let s: f64 = (1..d)
            .map(|k| binomial(d as i64, k as i64) * g[k] * g[d - k])
            .sum();
        g.push((qd - s) / (2.0 * g[0]));
    }
    g
}
