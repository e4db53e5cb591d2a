use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the coefficients of an expansion are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Full real orthonormal basis on `S^2`; block `k` has `2k+1` entries ordered `m = -k..=k`.
    Grid,
    /// One coefficient per degree, in the orthonormal zonal basis
    /// `Z_k = sqrt(N(n,k)/ω_n) P_k^n(u·ē)`.
    Zonal,
}

/// Coefficients of a function on `S^{n-1}`, grouped by degree.
///
/// Both layouts use orthonormal bases, so the `L^2` norm is the Euclidean
/// norm of the coefficient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicExpansion {
    dim: usize,
    representation: Representation,
    max_degree: usize,
    coeffs: Vec<f64>,
}

impl HarmonicExpansion {
    pub fn zeros(dim: usize, representation: Representation, max_degree: usize) -> Self {
        let len = Self::layout_len(representation, max_degree);
        Self {
            dim,
            representation,
            max_degree,
            coeffs: vec![0.0; len],
        }
    }

    pub fn from_coefficients(
        dim: usize,
        representation: Representation,
        max_degree: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        if representation == Representation::Grid && dim != 3 {
            return Err(Error::Domain(format!(
                "grid expansions exist only for n = 3, got n = {dim}"
            )));
        }
        let len = Self::layout_len(representation, max_degree);
        if coeffs.len() != len {
            return Err(Error::SizeMismatch(format!(
                "expected {len} coefficients for degree {max_degree}, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            dim,
            representation,
            max_degree,
            coeffs,
        })
    }

    fn layout_len(representation: Representation, max_degree: usize) -> usize {
        match representation {
            Representation::Grid => (max_degree + 1) * (max_degree + 1),
            Representation::Zonal => max_degree + 1,
        }
    }

    fn offset(&self, k: usize) -> usize {
        match self.representation {
            Representation::Grid => k * k,
            Representation::Zonal => k,
        }
    }

    fn block_len(&self, k: usize) -> usize {
        match self.representation {
            Representation::Grid => 2 * k + 1,
            Representation::Zonal => 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn block(&self, k: usize) -> &[f64] {
        let o = self.offset(k);
        &self.coeffs[o..o + self.block_len(k)]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut [f64] {
        let o = self.offset(k);
        let len = self.block_len(k);
        &mut self.coeffs[o..o + len]
    }

    /// Grid coefficient of the basis function of degree `l` and order `m`.
    pub fn grid_coefficient(&self, l: usize, m: i64) -> f64 {
        debug_assert_eq!(self.representation, Representation::Grid);
        self.coeffs[l * l + (m + l as i64) as usize]
    }

    pub fn set_grid_coefficient(&mut self, l: usize, m: i64, value: f64) {
        let idx = l * l + (m + l as i64) as usize;
        self.coeffs[idx] = value;
    }

    /// Euclidean norm of block `k`, which is `‖π_k f‖_2`.
    pub fn block_norm(&self, k: usize) -> f64 {
        self.block(k).iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `‖f‖_2` by Parseval.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `<f, g>_{L^2}` by Parseval.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }

    /// Multiplies block `k` by `factor(k)`.
    pub fn scale_degrees(&self, factor: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for k in 0..=self.max_degree {
            let f = factor(k);
            out.block_mut(k).iter_mut().for_each(|c| *c *= f);
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.scale_degrees(|_| factor)
    }

    /// Keeps only block `k`.
    pub fn component(&self, k: usize) -> Self {
        self.scale_degrees(|j| if j == k { 1.0 } else { 0.0 })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = op(*c, *o);
        }
        Ok(out)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim
            || self.representation != other.representation
            || self.max_degree != other.max_degree
        {
            return Err(Error::RepresentationMismatch(format!(
                "expansions differ: (n={}, {:?}, K={}) vs (n={}, {:?}, K={})",
                self.dim,
                self.representation,
                self.max_degree,
                other.dim,
                other.representation,
                other.max_degree
            )));
        }
        Ok(())
    }

    /// Largest degree with a block norm above `tol`; `None` for the zero expansion.
    pub fn effective_degree(&self, tol: f64) -> Option<usize> {
        (0..=self.max_degree).rev().find(|&k| self.block_norm(k) > tol)
    }
}
