//! Convex bodies given by support functions, validated at construction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discriminant::{area_density, AreaDensity};
use crate::error::{Error, Result};
use crate::harmonics::sphere::ambient_from_frame;
use crate::harmonics::{
    ball_volume, binomial, Domain, HarmonicExpansion, Representation, DEFAULT_ALIASING_THRESHOLD,
};
use crate::profile::{hessian_pair, Profile};

/// Relative slack for the positive semi-definiteness check.
pub const PSD_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Restricted Hessians at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum HessianField {
    /// `[H_θθ, H_θφ, H_φφ]` in the frame `(e_θ, e_φ)`.
    Grid(Vec<[f64; 3]>),
    /// `(ν, μ)`: `ν` once and `μ` with multiplicity `n-2`.
    Zonal(Vec<(f64, f64)>),
}

/// `D²h(u)` at one node.
#[derive(Debug, Clone, PartialEq)]
pub enum RestrictedHessian {
    /// Symmetric matrix in an orthonormal basis `(e_θ, e_φ)` of `u^⊥`.
    Frame {
        u: [f64; 3],
        basis: [[f64; 3]; 2],
        matrix: [[f64; 2]; 2],
    },
    Zonal {
        t: f64,
        nu: f64,
        mu: f64,
        multiplicity: usize,
    },
}

impl RestrictedHessian {
    /// Eigenvalues in increasing order (zonal: `μ` repeated `n-2` times).
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            RestrictedHessian::Frame { matrix, .. } => {
                let (l, h) = sym2_eigen([matrix[0][0], matrix[0][1], matrix[1][1]]);
                vec![l, h]
            }
            RestrictedHessian::Zonal {
                nu, mu, multiplicity, ..
            } => {
                let mut v = vec![*mu; *multiplicity];
                v.push(*nu);
                v.sort_by(f64::total_cmp);
                v
            }
        }
    }

    /// Ambient 3×3 matrix (grid only).
    pub fn ambient(&self) -> Option<[[f64; 3]; 3]> {
        match self {
            RestrictedHessian::Frame { basis, matrix, .. } => Some(ambient_from_frame(
                [matrix[0][0], matrix[0][1], matrix[1][1]],
                basis[0],
                basis[1],
            )),
            RestrictedHessian::Zonal { .. } => None,
        }
    }
}

#[inline]
pub(crate) fn sym2_eigen(h: [f64; 3]) -> (f64, f64) {
    let mean = 0.5 * (h[0] + h[2]);
    let rad = (0.25 * (h[0] - h[2]).powi(2) + h[1] * h[1]).sqrt();
    (mean - rad, mean + rad)
}

/// A failed validity check at a node.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Violation {
    NotPositive { node: usize, value: f64 },
    NotConvex { node: usize, eigenvalue: f64 },
}

/// A convex body with `o` in its interior, as a support function sampled on a
/// domain, with its harmonic expansion and restricted Hessians.
#[derive(Debug, Clone)]
pub struct Body {
    domain: Domain,
    values: Vec<f64>,
    expansion: HarmonicExpansion,
    hessians: HessianField,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
}

impl Body {
    fn assemble(
        domain: &Domain,
        values: Vec<f64>,
        expansion: HarmonicExpansion,
        hessians: HessianField,
    ) -> std::result::Result<Self, Violation> {
        if let Some((node, v)) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .filter(|(_, v)| **v <= 0.0)
        {
            return Err(Violation::NotPositive { node, value: *v });
        }
        let eig: Vec<(f64, f64)> = match &hessians {
            HessianField::Grid(h) => h.iter().map(|m| sym2_eigen(*m)).collect(),
            HessianField::Zonal(p) => p.iter().map(|(nu, mu)| (nu.min(*mu), nu.max(*mu))).collect(),
        };
        let (mut min_node, mut min_eig, mut max_eig) = (0, f64::INFINITY, f64::NEG_INFINITY);
        for (i, (lo, hi)) in eig.iter().enumerate() {
            if *lo < min_eig {
                min_eig = *lo;
                min_node = i;
            }
            max_eig = max_eig.max(*hi);
        }
        let tol = PSD_RELATIVE_TOLERANCE * max_eig.max(f64::MIN_POSITIVE);
        if min_eig < -tol {
            return Err(Violation::NotConvex {
                node: min_node,
                eigenvalue: min_eig,
            });
        }
        Ok(Self {
            domain: domain.clone(),
            values,
            expansion,
            hessians,
            min_eigenvalue: min_eig,
            max_eigenvalue: max_eig,
        })
    }

    fn node_label(domain: &Domain, node: usize) -> String {
        match domain {
            Domain::Sphere(s) => {
                let u = s.node(node);
                format!("node {node} u = ({:.4}, {:.4}, {:.4})", u[0], u[1], u[2])
            }
            Domain::Zonal(z) => format!("node {node} t = {:.6}", z.points()[node]),
        }
    }

    fn input_error(domain: &Domain, v: Violation) -> Error {
        match v {
            Violation::NotPositive { node, value } => Error::NotPositive {
                value,
                location: Self::node_label(domain, node),
            },
            Violation::NotConvex { node, eigenvalue } => Error::NotConvex {
                eigenvalue,
                location: Self::node_label(domain, node),
            },
        }
    }

    /// Body whose support function is the (band-limited) expansion.
    pub fn from_expansion(domain: &Domain, expansion: HarmonicExpansion) -> Result<Self> {
        Self::from_expansion_raw(domain, expansion)?.map_err(|v| Self::input_error(domain, v))
    }

    /// Like [`Self::from_expansion`] but keeps the failed check separate.
    pub(crate) fn from_expansion_raw(
        domain: &Domain,
        expansion: HarmonicExpansion,
    ) -> Result<std::result::Result<Self, Violation>> {
        if expansion.dim() != domain.dim()
            || expansion.representation() != domain.representation()
            || expansion.max_degree() != domain.max_degree()
        {
            return Err(Error::RepresentationMismatch(format!(
                "expansion (n={}, {:?}, K={}) does not live on {}",
                expansion.dim(),
                expansion.representation(),
                expansion.max_degree(),
                domain.describe()
            )));
        }
        let (values, hessians) = match domain {
            Domain::Sphere(s) => (s.synthesize(&expansion)?, HessianField::Grid(s.restricted_hessians(&expansion)?)),
            Domain::Zonal(z) => {
                let [g, g1, g2] = z.synthesize_derivatives(&expansion)?;
                let pairs = z
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(j, t)| hessian_pair(g[j], g1[j], g2[j], *t))
                    .collect();
                (g, HessianField::Zonal(pairs))
            }
        };
        Ok(Self::assemble(domain, values, expansion, hessians))
    }

    /// Grid body from samples of `h` at the nodes of an `S^2` domain. Fails with
    /// [`Error::Aliasing`] if more than `1e-9` of the energy lies above `K_max`.
    pub fn from_grid_values(domain: &Domain, values: &[f64]) -> Result<Self> {
        Self::from_grid_values_with_threshold(domain, values, DEFAULT_ALIASING_THRESHOLD)
    }

    pub fn from_grid_values_with_threshold(domain: &Domain, values: &[f64], threshold: f64) -> Result<Self> {
        if !matches!(domain, Domain::Sphere(_)) {
            return Err(Error::RepresentationMismatch("grid samples need an S^2 domain".into()));
        }
        let e = domain.analyze_strict(values, threshold)?;
        Self::from_expansion(domain, e)
    }

    /// Grid body from a function of the unit vector.
    pub fn from_fn(domain: &Domain, h: impl Fn([f64; 3]) -> f64 + Sync) -> Result<Self> {
        let Domain::Sphere(s) = domain else {
            return Err(Error::RepresentationMismatch("from_fn needs an S^2 domain".into()));
        };
        let values: Vec<f64> = (0..s.len()).into_par_iter().map(|i| h(s.node(i))).collect();
        Self::from_grid_values(domain, &values)
    }

    /// Body of revolution `h(u) = g(u·ē)` on a zonal domain. Convexity is
    /// certified on the nodes and on a dense scan of the profile.
    pub fn zonal(domain: &Domain, profile: &Profile) -> Result<Self> {
        let Domain::Zonal(z) = domain else {
            return Err(Error::RepresentationMismatch("zonal bodies need a zonal domain".into()));
        };
        profile.validate()?;
        let (gmin, tmin) = profile.min_value();
        if gmin <= 0.0 {
            return Err(Error::NotPositive {
                value: gmin,
                location: format!("t = {tmin:.6}"),
            });
        }
        let (emin, temin) = profile.min_eigenvalue(z.points());
        let tol = PSD_RELATIVE_TOLERANCE * profile.max_eigenvalue().max(f64::MIN_POSITIVE);
        if emin < -tol {
            return Err(Error::NotConvex {
                eigenvalue: emin,
                location: format!("t = {temin:.6}"),
            });
        }
        let values: Vec<f64> = z.points().iter().map(|t| profile.value(*t)).collect();
        let pairs = z.points().iter().map(|t| profile.hessian_eigenvalues(*t)).collect();
        let expansion = z.analyze(&values)?;
        Self::assemble(domain, values, expansion, HessianField::Zonal(pairs))
            .map_err(|v| Self::input_error(domain, v))
    }

    /// Body of revolution about the `z`-axis realized on an `S^2` grid.
    pub fn zonal_on_grid(domain: &Domain, profile: &Profile) -> Result<Self> {
        profile.validate()?;
        Self::from_fn(domain, |u| profile.value(u[2]))
    }

    /// Ball of radius `r` centred at the origin.
    pub fn ball(domain: &Domain, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("ball radius {r} must be positive")));
        }
        Self::from_expansion(domain, domain.constant(r))
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// `h` at the nodes.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn expansion(&self) -> &HarmonicExpansion {
        &self.expansion
    }

    pub fn hessians(&self) -> &HessianField {
        &self.hessians
    }

    /// Smallest restricted-Hessian eigenvalue over the nodes (the convexity certificate).
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.max_eigenvalue
    }

    pub fn restricted_hessian(&self, node: usize) -> RestrictedHessian {
        match (&self.domain, &self.hessians) {
            (Domain::Sphere(s), HessianField::Grid(h)) => {
                let (et, ep) = s.node_frame(node);
                let m = h[node];
                RestrictedHessian::Frame {
                    u: s.node(node),
                    basis: [et, ep],
                    matrix: [[m[0], m[1]], [m[1], m[2]]],
                }
            }
            (Domain::Zonal(z), HessianField::Zonal(p)) => RestrictedHessian::Zonal {
                t: z.points()[node],
                nu: p[node].0,
                mu: p[node].1,
                multiplicity: z.dim() - 2,
            },
            _ => unreachable!("hessian field always matches the domain"),
        }
    }

    /// `λK` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("scale {lambda} must be positive")));
        }
        let hessians = match &self.hessians {
            HessianField::Grid(h) => HessianField::Grid(h.iter().map(|m| m.map(|x| x * lambda)).collect()),
            HessianField::Zonal(p) => HessianField::Zonal(p.iter().map(|(a, b)| (a * lambda, b * lambda)).collect()),
        };
        Ok(Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * lambda).collect(),
            expansion: self.expansion.scaled(lambda),
            hessians,
            min_eigenvalue: self.min_eigenvalue * lambda,
            max_eigenvalue: self.max_eigenvalue * lambda,
        })
    }

    /// Minkowski sum: `h_{K+L} = h_K + h_L`.
    pub fn minkowski_sum(&self, other: &Body) -> Result<Self> {
        self.domain.check_compatible(&other.domain)?;
        let values: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let expansion = self.expansion.add(&other.expansion)?;
        let hessians = match (&self.hessians, &other.hessians) {
            (HessianField::Grid(a), HessianField::Grid(b)) => HessianField::Grid(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| [x[0] + y[0], x[1] + y[1], x[2] + y[2]])
                    .collect(),
            ),
            (HessianField::Zonal(a), HessianField::Zonal(b)) => {
                HessianField::Zonal(a.iter().zip(b).map(|(x, y)| (x.0 + y.0, x.1 + y.1)).collect())
            }
            _ => unreachable!(),
        };
        Self::assemble(&self.domain, values, expansion, hessians).map_err(|v| Self::input_error(&self.domain, v))
    }

    /// `K + y`: adds `u·y` to the support function. Zonal bodies only move along `ē`
    /// (the last coordinate of `y`).
    pub fn translated(&self, y: &[f64]) -> Result<Self> {
        let n = self.dim();
        if y.len() != n {
            return Err(Error::SizeMismatch(format!("translation needs {n} coordinates")));
        }
        let shift: Vec<f64> = match &self.domain {
            Domain::Sphere(s) => (0..s.len())
                .map(|i| {
                    let u = s.node(i);
                    u[0] * y[0] + u[1] * y[1] + u[2] * y[2]
                })
                .collect(),
            Domain::Zonal(z) => {
                if y[..n - 1].iter().any(|c| *c != 0.0) {
                    return Err(Error::Domain("zonal bodies can only be translated along the axis".into()));
                }
                z.points().iter().map(|t| t * y[n - 1]).collect()
            }
        };
        let values: Vec<f64> = self.values.iter().zip(&shift).map(|(h, s)| h + s).collect();
        let lin = self.domain.analyze(&shift)?;
        let expansion = self.expansion.add(&lin)?;
        Self::assemble(&self.domain, values, expansion, self.hessians.clone())
            .map_err(|v| Self::input_error(&self.domain, v))
    }

    /// `ρK` for a rotation matrix `ρ` (grid only): `h_{ρK}(u) = h_K(ρ^T u)`.
    pub fn rotated(&self, rotation: &[[f64; 3]; 3]) -> Result<Self> {
        let Domain::Sphere(s) = &self.domain else {
            return Err(Error::RepresentationMismatch("rotations need an S^2 grid body".into()));
        };
        let values: Result<Vec<f64>> = (0..s.len())
            .into_par_iter()
            .map(|i| {
                let u = s.node(i);
                let v = [0, 1, 2].map(|c| (0..3).map(|r| rotation[r][c] * u[r]).sum::<f64>());
                s.evaluate_at(&self.expansion, v).map(|(h, _)| h)
            })
            .collect();
        Self::from_grid_values(&self.domain, &values?)
    }

    /// `h` and the ambient restricted Hessian at an arbitrary direction (grid only).
    pub fn evaluate_at(&self, u: [f64; 3]) -> Result<(f64, [[f64; 3]; 3])> {
        match &self.domain {
            Domain::Sphere(s) => s.evaluate_at(&self.expansion, u),
            Domain::Zonal(_) => Err(Error::RepresentationMismatch("point evaluation needs a grid body".into())),
        }
    }

    /// `π_0 h_K`.
    pub fn mean_support(&self) -> f64 {
        self.domain.integrate(&self.values) / self.domain.total_mass()
    }

    /// Mean width `w(K) = 2 π_0 h_K`.
    pub fn mean_width(&self) -> f64 {
        2.0 * self.mean_support()
    }

    pub fn area_density(&self, i: usize) -> Result<AreaDensity> {
        area_density(self, i)
    }

    /// `V_i(K)` for `1 <= i <= n`: `C(n,i)/κ_{n-i} · (1/n) ∫ s_i` for `i < n`,
    /// and the support route for `i = n`.
    pub fn intrinsic_volume(&self, i: usize) -> Result<f64> {
        let n = self.dim();
        if i == 0 || i > n {
            return Err(Error::Domain(format!("intrinsic volume index {i} outside 1..={n}")));
        }
        if i == n {
            return self.intrinsic_volume_via_support(n);
        }
        let s = self.area_density(i)?;
        Ok(intrinsic_factor(n, i) * s.mass() / n as f64)
    }

    /// `V_i(K) = C(n,i)/κ_{n-i} · (1/n) ∫ h_K s_{i-1}` for `1 <= i <= n`.
    pub fn intrinsic_volume_via_support(&self, i: usize) -> Result<f64> {
        let n = self.dim();
        if i == 0 || i > n {
            return Err(Error::Domain(format!("intrinsic volume index {i} outside 1..={n}")));
        }
        let s = self.area_density(i - 1)?;
        let prod: Vec<f64> = s.values().iter().zip(&self.values).map(|(a, b)| a * b).collect();
        Ok(intrinsic_factor(n, i) * self.domain.integrate(&prod) / n as f64)
    }

    /// Serializable form.
    pub fn to_json(&self) -> BodyJson {
        let (grid, zonal_nodes, profile) = match &self.domain {
            Domain::Sphere(s) => (Some(s.grid_shape()), None, None),
            Domain::Zonal(z) => {
                let [g, g1, g2] = z
                    .synthesize_derivatives(&self.expansion)
                    .unwrap_or_else(|_| [vec![], vec![], vec![]]);
                (
                    None,
                    Some(z.len()),
                    Some(ProfileSamples {
                        t: z.points().to_vec(),
                        g,
                        g1,
                        g2,
                    }),
                )
            }
        };
        BodyJson {
            format: 1,
            dim_n: self.dim(),
            rep_kind: self.domain.representation(),
            k_max: self.domain.max_degree(),
            grid,
            zonal_nodes,
            coefficients: self.expansion.coefficients().to_vec(),
            profile,
        }
    }

    /// Rebuilds a body from its serialized expansion.
    pub fn from_json(json: &BodyJson) -> Result<Self> {
        if json.format != 1 {
            return Err(Error::Config(format!("unsupported body format {}", json.format)));
        }
        let domain = match json.rep_kind {
            Representation::Grid => {
                let (a, b) = json
                    .grid
                    .ok_or_else(|| Error::Config("grid body without grid shape".into()))?;
                Domain::sphere(json.k_max, a, b)?
            }
            Representation::Zonal => match json.zonal_nodes {
                Some(q) => Domain::zonal_with_points(json.dim_n, json.k_max, q)?,
                None => Domain::zonal(json.dim_n, json.k_max)?,
            },
        };
        Self::from_json_on(&domain, json)
    }

    /// Rebuilds a body on an existing domain.
    pub fn from_json_on(domain: &Domain, json: &BodyJson) -> Result<Self> {
        if json.dim_n != domain.dim() || json.rep_kind != domain.representation() || json.k_max != domain.max_degree() {
            return Err(Error::RepresentationMismatch(format!(
                "serialized body (n={}, K={}) does not fit {}",
                json.dim_n,
                json.k_max,
                domain.describe()
            )));
        }
        let e = HarmonicExpansion::from_coefficients(json.dim_n, json.rep_kind, json.k_max, json.coefficients.clone())?;
        Self::from_expansion(domain, e)
    }
}

/// `C(n,i)/κ_{n-i}`.
fn intrinsic_factor(n: usize, i: usize) -> f64 {
    binomial(n as i64, i as i64) / ball_volume(n - i)
}

/// JSON form of a body (format 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyJson {
    pub format: u32,
    pub dim_n: usize,
    pub rep_kind: Representation,
    #[serde(rename = "K_max")]
    pub k_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zonal_nodes: Option<usize>,
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSamples>,
}

/// Zonal profile samples `g, g', g''` at the nodes `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSamples {
    pub t: Vec<f64>,
    pub g: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
}

/// Grid-sup approximation of `d_H(K, L) = ‖h_K - h_L‖_∞`.
pub fn hausdorff_distance(k: &Body, l: &Body) -> Result<f64> {
    k.domain.check_compatible(&l.domain)?;
    Ok(k.values
        .iter()
        .zip(&l.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

/// `(∫ |h_K - h_L|^p)^{1/p}` by quadrature.
pub fn lp_distance(k: &Body, l: &Body, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("L_p distance needs p >= 1, got {p}")));
    }
    k.domain.check_compatible(&l.domain)?;
    let s: f64 = k
        .values
        .iter()
        .zip(&l.values)
        .zip(k.domain.weights())
        .map(|((a, b), w)| w * (a - b).abs().powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}

/// `‖h_K - h_L‖_2` by Parseval on the expansions.
pub fn l2_distance_spectral(k: &Body, l: &Body) -> Result<f64> {
    Ok(k.expansion.sub(&l.expansion)?.norm())
}

/// `d_TV = (1/2) ∫ |f - g|` between two densities of the same degree.
pub fn tv_distance(f: &AreaDensity, g: &AreaDensity) -> Result<f64> {
    if f.degree() != g.degree() || f.dim() != g.dim() {
        return Err(Error::RepresentationMismatch(format!(
            "densities of degree {} (n={}) and {} (n={})",
            f.degree(),
            f.dim(),
            g.degree(),
            g.dim()
        )));
    }
    f.domain().check_compatible(g.domain())?;
    Ok(0.5
        * f.values()
            .iter()
            .zip(g.values())
            .zip(f.domain().weights())
            .map(|((a, b), w)| w * (a - b).abs())
            .sum::<f64>())
}

impl Body {
    /// `h = 1 + Σ ε Y_lm` with orthonormal harmonics. Zonal domains accept
    /// only `m = 0` (the zonal harmonic `Z_l`).
    pub fn perturbed_ball(domain: &Domain, terms: &[(usize, i64, f64)]) -> Result<Self> {
        let mut e = domain.constant(1.0);
        for &(l, m, eps) in terms {
            if l > domain.max_degree() || m.unsigned_abs() as usize > l {
                return Err(Error::Domain(format!("no harmonic of degree {l} and order {m} here")));
            }
            match domain.representation() {
                Representation::Grid => {
                    let c = e.grid_coefficient(l, m);
                    e.set_grid_coefficient(l, m, c + eps);
                }
                Representation::Zonal => {
                    if m != 0 {
                        return Err(Error::Domain("zonal bodies only carry m = 0 terms".into()));
                    }
                    e.block_mut(l)[0] += eps;
                }
            }
        }
        Self::from_expansion(domain, e)
    }
}
