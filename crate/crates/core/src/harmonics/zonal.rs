//! Zonal functions `F(u·ē)` on `S^{n-1}` for any `n >= 3`, sampled at
//! Gauss–Gegenbauer nodes in `t = u·ē`.

use super::expansion::{HarmonicExpansion, Representation};
use super::legendre::{dimension_count, legendre_derivative_values, sphere_area};
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ZonalTransform {
    dim: usize,
    kmax: usize,
    rule: QuadratureRule,
    /// `ω_{n-1} w_j`: weights of the induced rule on the sphere.
    sphere_weights: Vec<f64>,
    /// `sqrt(N(n,k)/ω_n)`, taking Legendre coefficients to orthonormal ones.
    basis_scale: Vec<f64>,
    /// `P_k^n`, `P_k^n'`, `P_k^n''` at every node, row-major by node.
    p: Vec<f64>,
    dp: Vec<f64>,
    d2p: Vec<f64>,
}

impl ZonalTransform {
    /// Node count that integrates `s_{n-1}·Z_k` exactly for polynomial bodies of degree `kmax`.
    pub fn default_points(n: usize, kmax: usize) -> usize {
        96usize.max((n * kmax + 1).div_ceil(2) + 4)
    }

    pub fn new(n: usize, kmax: usize) -> Result<Self> {
        Self::with_points(n, kmax, Self::default_points(n, kmax))
    }

    pub fn with_points(n: usize, kmax: usize, points: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("zonal transform needs n >= 3, got {n}")));
        }
        if points <= kmax {
            return Err(Error::Domain(format!(
                "{points} nodes cannot resolve degree {kmax}"
            )));
        }
        let rule = QuadratureRule::gegenbauer(n, points)?;
        let factor = sphere_area(n - 1);
        let sphere_weights = rule.weights().iter().map(|w| w * factor).collect();
        let omega = sphere_area(n);
        let basis_scale = (0..=kmax)
            .map(|k| (dimension_count(n, k) as f64 / omega).sqrt())
            .collect();
        let mut p = Vec::with_capacity(points * (kmax + 1));
        let mut dp = Vec::with_capacity(points * (kmax + 1));
        let mut d2p = Vec::with_capacity(points * (kmax + 1));
        for &t in rule.points() {
            p.extend(legendre_derivative_values(n, kmax, t, 0));
            dp.extend(legendre_derivative_values(n, kmax, t, 1));
            d2p.extend(legendre_derivative_values(n, kmax, t, 2));
        }
        Ok(Self {
            dim: n,
            kmax,
            rule,
            sphere_weights,
            basis_scale,
            p,
            dp,
            d2p,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.kmax
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// Node values `t_j`.
    pub fn points(&self) -> &[f64] {
        self.rule.points()
    }

    /// Weights for integrating a zonal function over `S^{n-1}`.
    pub fn weights(&self) -> &[f64] {
        &self.sphere_weights
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// `sqrt(N(n,k)/ω_n)`.
    pub fn basis_scale(&self, k: usize) -> f64 {
        self.basis_scale[k]
    }

    fn check_expansion(&self, e: &HarmonicExpansion) -> Result<()> {
        if e.representation() != Representation::Zonal || e.dim() != self.dim {
            return Err(Error::RepresentationMismatch(format!(
                "zonal transform for n = {} got a {:?} expansion with n = {}",
                self.dim,
                e.representation(),
                e.dim()
            )));
        }
        if e.max_degree() > self.kmax {
            return Err(Error::Domain(format!(
                "expansion degree {} exceeds transform degree {}",
                e.max_degree(),
                self.kmax
            )));
        }
        Ok(())
    }

    pub fn analyze(&self, values: &[f64]) -> Result<HarmonicExpansion> {
        if values.len() != self.len() {
            return Err(Error::SizeMismatch(format!(
                "expected {} zonal samples, got {}",
                self.len(),
                values.len()
            )));
        }
        let stride = self.kmax + 1;
        let mut coeffs = vec![0.0; stride];
        for (j, (f, w)) in values.iter().zip(&self.sphere_weights).enumerate() {
            let row = &self.p[j * stride..(j + 1) * stride];
            for (c, pk) in coeffs.iter_mut().zip(row) {
                *c += w * f * pk;
            }
        }
        for (c, s) in coeffs.iter_mut().zip(&self.basis_scale) {
            *c *= s;
        }
        HarmonicExpansion::from_coefficients(self.dim, Representation::Zonal, self.kmax, coeffs)
    }

    /// Projection plus relative energy left above `kmax`.
    pub fn analyze_with_residual(&self, values: &[f64]) -> Result<(HarmonicExpansion, f64)> {
        let e = self.analyze(values)?;
        let back = self.synthesize(&e)?;
        let mut total = 0.0;
        let mut resid = 0.0;
        for ((v, b), w) in values.iter().zip(&back).zip(&self.sphere_weights) {
            total += w * v * v;
            resid += w * (v - b) * (v - b);
        }
        Ok((e, if total > 0.0 { resid / total } else { 0.0 }))
    }

    fn synth_table(&self, e: &HarmonicExpansion, table: &[f64]) -> Vec<f64> {
        let stride = self.kmax + 1;
        let c = e.coefficients();
        (0..self.len())
            .map(|j| {
                let row = &table[j * stride..(j + 1) * stride];
                (0..=e.max_degree()).map(|k| c[k] * self.basis_scale[k] * row[k]).sum()
            })
            .collect()
    }

    pub fn synthesize(&self, e: &HarmonicExpansion) -> Result<Vec<f64>> {
        self.check_expansion(e)?;
        Ok(self.synth_table(e, &self.p))
    }

    /// `(g, g', g'')` of the profile at every node.
    pub fn synthesize_derivatives(&self, e: &HarmonicExpansion) -> Result<[Vec<f64>; 3]> {
        self.check_expansion(e)?;
        Ok([
            self.synth_table(e, &self.p),
            self.synth_table(e, &self.dp),
            self.synth_table(e, &self.d2p),
        ])
    }

    /// Legendre coefficients `c_k` with `F = Σ c_k P_k^n`.
    pub fn legendre_coefficients(&self, e: &HarmonicExpansion) -> Vec<f64> {
        e.coefficients()
            .iter()
            .enumerate()
            .map(|(k, b)| b * self.basis_scale[k])
            .collect()
    }

    /// Orthonormal expansion of `Σ c_k P_k^n`.
    pub fn from_legendre_coefficients(&self, c: &[f64]) -> Result<HarmonicExpansion> {
        if c.len() > self.kmax + 1 {
            return Err(Error::Domain(format!(
                "{} Legendre coefficients exceed degree {}",
                c.len(),
                self.kmax
            )));
        }
        let mut coeffs = vec![0.0; self.kmax + 1];
        for (k, ck) in c.iter().enumerate() {
            coeffs[k] = ck / self.basis_scale[k];
        }
        HarmonicExpansion::from_coefficients(self.dim, Representation::Zonal, self.kmax, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_points_grow_with_dimension() {
        assert_eq!(ZonalTransform::default_points(3, 48), 96);
        assert!(ZonalTransform::default_points(8, 48) >= 193);
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for n in 3..=8 {
            let z = ZonalTransform::with_points(n, 4, 10).unwrap();
            let total: f64 = z.weights().iter().sum();
            assert!((total - sphere_area(n)).abs() < 1e-12 * total);
        }
    }

    #[test]
    fn legendre_round_trip() {
        let z = ZonalTransform::new(5, 6).unwrap();
        let c = [1.0, 0.0, 0.2, 0.0, -0.1];
        let e = z.from_legendre_coefficients(&c).unwrap();
        let back = z.legendre_coefficients(&e);
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).abs() < 1e-15);
        }
        let e2 = z.analyze(&z.synthesize(&e).unwrap()).unwrap();
        assert!(e2.sub(&e).unwrap().norm() < 1e-13);
    }
}
