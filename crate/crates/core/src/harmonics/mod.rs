//! Harmonic analysis on the sphere: Legendre machinery, quadrature,
//! projection/synthesis on `S^2`, zonal transforms for any dimension, and
//! smoothing operators.

pub mod expansion;
pub mod legendre;
pub mod quadrature;
pub mod smoothing;
pub mod sphere;
pub mod zonal;

use std::sync::Arc;

pub use expansion::{HarmonicExpansion, Representation};
pub use legendre::{
    ball_volume, binomial, box_multiplier, dimension_count, legendre, legendre_values, sphere_area,
};
pub use quadrature::{gauss_jacobi, Nodes, QuadratureRule};
pub use smoothing::{laplacian, smooth_mj, theta_cutoff, ualpha_norm_estimate};
pub use sphere::SphereTransform;
pub use zonal::ZonalTransform;

use crate::error::{Error, Result};

/// Default truncation degree.
pub const DEFAULT_KMAX: usize = 48;
/// Default `S^2` grid (θ rings × φ samples).
pub const DEFAULT_GRID: (usize, usize) = (96, 192);
/// Relative energy above the truncation degree tolerated on grid input.
pub const DEFAULT_ALIASING_THRESHOLD: f64 = 1e-9;

/// Where functions live: the full `S^2` grid or zonal samples on `S^{n-1}`.
#[derive(Debug, Clone)]
pub enum Domain {
    Sphere(Arc<SphereTransform>),
    Zonal(Arc<ZonalTransform>),
}

impl Domain {
    /// `S^2` grid with the given truncation degree and grid shape.
    pub fn sphere(kmax: usize, ntheta: usize, nphi: usize) -> Result<Self> {
        Ok(Domain::Sphere(Arc::new(SphereTransform::new(kmax, ntheta, nphi)?)))
    }

    /// `S^2` with `K_max = 48` on the 96×192 grid.
    pub fn default_sphere() -> Result<Self> {
        Self::sphere(DEFAULT_KMAX, DEFAULT_GRID.0, DEFAULT_GRID.1)
    }

    pub fn zonal(n: usize, kmax: usize) -> Result<Self> {
        Ok(Domain::Zonal(Arc::new(ZonalTransform::new(n, kmax)?)))
    }

    pub fn zonal_with_points(n: usize, kmax: usize, points: usize) -> Result<Self> {
        Ok(Domain::Zonal(Arc::new(ZonalTransform::with_points(n, kmax, points)?)))
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Sphere(_) => 3,
            Domain::Zonal(z) => z.dim(),
        }
    }

    pub fn max_degree(&self) -> usize {
        match self {
            Domain::Sphere(s) => s.max_degree(),
            Domain::Zonal(z) => z.max_degree(),
        }
    }

    pub fn representation(&self) -> Representation {
        match self {
            Domain::Sphere(_) => Representation::Grid,
            Domain::Zonal(_) => Representation::Zonal,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Domain::Sphere(s) => s.len(),
            Domain::Zonal(z) => z.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weights of the sphere measure at the nodes.
    pub fn weights(&self) -> &[f64] {
        match self {
            Domain::Sphere(s) => s.weights(),
            Domain::Zonal(z) => z.weights(),
        }
    }

    /// `ω_n`.
    pub fn total_mass(&self) -> f64 {
        sphere_area(self.dim())
    }

    /// Same dimension, representation, degree and nodes.
    pub fn compatible(&self, other: &Domain) -> bool {
        match (self, other) {
            (Domain::Sphere(a), Domain::Sphere(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.max_degree() == b.max_degree() && a.grid_shape() == b.grid_shape())
            }
            (Domain::Zonal(a), Domain::Zonal(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.dim() == b.dim() && a.max_degree() == b.max_degree() && a.len() == b.len())
            }
            _ => false,
        }
    }

    pub fn check_compatible(&self, other: &Domain) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::RepresentationMismatch(format!(
                "{} vs {}",
                self.describe(),
                other.describe()
            )))
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Sphere(s) => {
                let (a, b) = s.grid_shape();
                format!("grid S^2 K_max={} {}x{}", s.max_degree(), a, b)
            }
            Domain::Zonal(z) => format!("zonal n={} K_max={} nodes={}", z.dim(), z.max_degree(), z.len()),
        }
    }

    /// `∫ f` over the sphere.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(self.weights()).map(|(v, w)| v * w).sum()
    }

    /// Projection onto degrees `<= K_max` (no aliasing check).
    pub fn analyze(&self, values: &[f64]) -> Result<HarmonicExpansion> {
        match self {
            Domain::Sphere(s) => s.analyze(values),
            Domain::Zonal(z) => z.analyze(values),
        }
    }

    /// Analysis that fails when the relative energy above `K_max` exceeds `threshold`.
    pub fn analyze_strict(&self, values: &[f64], threshold: f64) -> Result<HarmonicExpansion> {
        let (e, rel) = match self {
            Domain::Sphere(s) => s.analyze_with_residual(values)?,
            Domain::Zonal(z) => z.analyze_with_residual(values)?,
        };
        if rel > threshold {
            return Err(Error::Aliasing {
                max_degree: self.max_degree(),
                relative_energy: rel,
                threshold,
            });
        }
        Ok(e)
    }

    pub fn synthesize(&self, e: &HarmonicExpansion) -> Result<Vec<f64>> {
        match self {
            Domain::Sphere(s) => s.synthesize(e),
            Domain::Zonal(z) => z.synthesize(e),
        }
    }

    /// Samples `π_k f` at the nodes.
    pub fn project(&self, values: &[f64], k: usize) -> Result<Vec<f64>> {
        let e = self.analyze(values)?;
        if k > e.max_degree() {
            return Ok(vec![0.0; values.len()]);
        }
        self.synthesize(&e.component(k))
    }

    /// Zero expansion of this domain.
    pub fn zero_expansion(&self) -> HarmonicExpansion {
        HarmonicExpansion::zeros(self.dim(), self.representation(), self.max_degree())
    }

    /// Expansion of the constant function `c`.
    pub fn constant(&self, c: f64) -> HarmonicExpansion {
        let mut e = self.zero_expansion();
        e.block_mut(0)[0] = c * self.total_mass().sqrt();
        e
    }

    /// `∫ u f(u) du`. For zonal data only the `ē` component can be nonzero;
    /// it is returned as the last of `n` coordinates.
    pub fn first_moment(&self, values: &[f64]) -> Vec<f64> {
        match self {
            Domain::Sphere(s) => {
                let mut m = vec![0.0; 3];
                for (i, (v, w)) in values.iter().zip(s.weights()).enumerate() {
                    let u = s.node(i);
                    for c in 0..3 {
                        m[c] += w * v * u[c];
                    }
                }
                m
            }
            Domain::Zonal(z) => {
                let mut m = vec![0.0; z.dim()];
                m[z.dim() - 1] = values
                    .iter()
                    .zip(z.weights())
                    .zip(z.points())
                    .map(|((v, w), t)| v * w * t)
                    .sum();
                m
            }
        }
    }
}

/// `a_k^n[g] = ω_{n-1} ∫ P_k^n(t) g(t) (1-t²)^{(n-3)/2} dt` on a
/// Gegenbauer-weighted interval rule for dimension `n`.
pub fn zonal_multiplier(n: usize, g: impl Fn(f64) -> f64, k: usize, rule: &QuadratureRule) -> f64 {
    if k > rule.design_degree() {
        log::warn!(
            "multiplier degree {k} exceeds the rule's design degree {}",
            rule.design_degree()
        );
    }
    let factor = sphere_area(n - 1);
    factor * rule.integrate(|t| legendre_values(n, k, t)[k] * g(t))
}

/// All multipliers `a_0..a_kmax` on one rule.
pub fn zonal_multipliers(n: usize, g: impl Fn(f64) -> f64, kmax: usize, rule: &QuadratureRule) -> Vec<f64> {
    let factor = sphere_area(n - 1);
    let mut out = vec![0.0; kmax + 1];
    for (t, w) in rule.points().iter().zip(rule.weights()) {
        let gv = g(*t) * w;
        for (a, p) in out.iter_mut().zip(legendre_values(n, kmax, *t)) {
            *a += gv * p;
        }
    }
    out.iter_mut().for_each(|a| *a *= factor);
    out
}
