//! Gauss–Jacobi rules (Golub–Welsch with Newton polishing), the Gegenbauer
//! rule for zonal integrals, composite rules split at profile breakpoints,
//! and the Gauss–Legendre × uniform product grid on `S^2`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use super::legendre::{gamma, sphere_area};
use crate::error::{Error, Result};

/// Evaluation points of a rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Nodes {
    Interval(Vec<f64>),
    Sphere(Vec<[f64; 3]>),
}

/// A positive quadrature rule on `[-1, 1]` (with a fixed weight function) or on `S^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Nodes,
    weights: Vec<f64>,
    design_degree: usize,
}

impl QuadratureRule {
    /// Gauss rule for `∫ F(t) (1 - t^2)^{(n-3)/2} dt`, exact up to degree `2 points - 1`.
    pub fn gegenbauer(n: usize, points: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension n = {n} must be at least 2")));
        }
        let w = (n as f64 - 3.0) / 2.0;
        let (nodes, weights) = gauss_jacobi(points, w, w)?;
        Ok(Self {
            nodes: Nodes::Interval(nodes),
            weights,
            design_degree: 2 * points - 1,
        })
    }

    /// Composite rule for `∫ F(t) (1 - t^2)^{(n-3)/2} dt` where `F` is smooth on each
    /// piece between consecutive `breaks`. End pieces absorb the endpoint
    /// singularity of the weight into a Jacobi rule; interior pieces use
    /// Gauss–Legendre with the weight folded into the node weights.
    pub fn gegenbauer_composite(n: usize, breaks: &[f64], points: usize) -> Result<Self> {
        let mut cuts: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|b| *b > -1.0 && *b < 1.0)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        if cuts.is_empty() {
            return Self::gegenbauer(n, points);
        }
        let w = (n as f64 - 3.0) / 2.0;
        let mut edges = vec![-1.0];
        edges.extend(cuts);
        edges.push(1.0);
        let (gl_x, gl_w) = gauss_jacobi(points, 0.0, 0.0)?;
        let (left_x, left_w) = gauss_jacobi(points, 0.0, w)?;
        let (right_x, right_w) = gauss_jacobi(points, w, 0.0)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let pieces = edges.len() - 1;
        for p in 0..pieces {
            let (a, b) = (edges[p], edges[p + 1]);
            let half = (b - a) / 2.0;
            if p == 0 {
                // (1+t)^w carried by the Jacobi weight, (1-t)^w folded in.
                let scale = half.powf(w + 1.0);
                for (x, wx) in left_x.iter().zip(&left_w) {
                    let t = a + half * (x + 1.0);
                    nodes.push(t);
                    weights.push(scale * wx * (1.0 - t).powf(w));
                }
            } else if p == pieces - 1 {
                let scale = half.powf(w + 1.0);
                for (x, wx) in right_x.iter().zip(&right_w) {
                    let t = a + half * (x + 1.0);
                    nodes.push(t);
                    weights.push(scale * wx * (1.0 + t).powf(w));
                }
            } else {
                for (x, wx) in gl_x.iter().zip(&gl_w) {
                    let t = a + half * (x + 1.0);
                    nodes.push(t);
                    weights.push(half * wx * (1.0 - t * t).powf(w));
                }
            }
        }
        Ok(Self {
            nodes: Nodes::Interval(nodes),
            weights,
            design_degree: 2 * points - 1,
        })
    }

    /// Product rule on `S^2`: Gauss–Legendre in `cos θ`, uniform in `φ`.
    /// Integrates spherical polynomials of degree `< min(2 ntheta, nphi)` exactly.
    pub fn sphere(ntheta: usize, nphi: usize) -> Result<Self> {
        if ntheta == 0 || nphi == 0 {
            return Err(Error::Domain("sphere grid must be non-empty".into()));
        }
        let (x, wx) = gauss_jacobi(ntheta, 0.0, 0.0)?;
        let dphi = 2.0 * PI / nphi as f64;
        let mut nodes = Vec::with_capacity(ntheta * nphi);
        let mut weights = Vec::with_capacity(ntheta * nphi);
        for (xj, wj) in x.iter().zip(&wx) {
            let s = (1.0 - xj * xj).sqrt();
            for k in 0..nphi {
                let phi = dphi * k as f64;
                nodes.push([s * phi.cos(), s * phi.sin(), *xj]);
                weights.push(wj * dphi);
            }
        }
        Ok(Self {
            nodes: Nodes::Sphere(nodes),
            weights,
            design_degree: (2 * ntheta - 1).min(nphi - 1),
        })
    }

    pub fn nodes(&self) -> &Nodes {
        &self.nodes
    }

    /// Interval nodes; empty for a sphere rule.
    pub fn points(&self) -> &[f64] {
        match &self.nodes {
            Nodes::Interval(t) => t,
            Nodes::Sphere(_) => &[],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn design_degree(&self) -> usize {
        self.design_degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ w_j F(t_j)` for an interval rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points()
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(*t))
            .sum()
    }
}

/// Recurrence coefficients (diagonal `a_k`, squared off-diagonal `b_k`) of the
/// monic Jacobi polynomials for the weight `(1-x)^α (1+x)^β`.
fn jacobi_recurrence(points: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut a = Vec::with_capacity(points);
    let mut b = Vec::with_capacity(points);
    for k in 0..points {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        a.push(if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        });
        b.push(match k {
            0 => 0.0,
            1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab)),
            _ => {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                    / (s * s * (s + 1.0) * (s - 1.0))
            }
        });
    }
    (a, b)
}

/// Gauss–Jacobi nodes (ascending) and weights for `∫ F(x) (1-x)^α (1+x)^β dx`.
pub fn gauss_jacobi(points: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if points == 0 {
        return Err(Error::Domain("a quadrature rule needs at least one node".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1 (got {alpha}, {beta})"
        )));
    }
    let (a, b) = jacobi_recurrence(points + 1, alpha, beta);
    let mu0 = 2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
        / gamma(alpha + beta + 2.0);

    let mut jac = DMatrix::<f64>::zeros(points, points);
    for k in 0..points {
        jac[(k, k)] = a[k];
        if k + 1 < points {
            let off = b[k + 1].sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let sqrt_b: Vec<f64> = b.iter().map(|v| v.sqrt()).collect();
    let mut weights = Vec::with_capacity(points);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_jacobi(points, *x, &a, &sqrt_b, mu0);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, _, sumsq) = orthonormal_jacobi(points, *x, &a, &sqrt_b, mu0);
        weights.push(1.0 / sumsq);
    }
    Ok((nodes, weights))
}

/// Orthonormal Jacobi polynomial of degree `n` at `x`, its derivative, and
/// `Σ_{k<n} p_k(x)^2` (the inverse Christoffel weight).
fn orthonormal_jacobi(n: usize, x: f64, a: &[f64], sqrt_b: &[f64], mu0: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    let mut sumsq = 0.0;
    for k in 0..n {
        sumsq += p * p;
        let lower = if k == 0 { 0.0 } else { sqrt_b[k] };
        let p_next = ((x - a[k]) * p - lower * p_prev) / sqrt_b[k + 1];
        let dp_next = (p + (x - a[k]) * dp - lower * dp_prev) / sqrt_b[k + 1];
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp, sumsq)
}

/// Number of nodes needed to integrate `(degree)`-polynomials exactly.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// `ω_{n-1}`, the factor turning a weighted interval integral of a zonal
/// function into an integral over `S^{n-1}`.
pub fn zonal_sphere_factor(n: usize) -> f64 {
    sphere_area(n - 1)
}
