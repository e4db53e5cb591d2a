//! Real orthonormal spherical harmonics on `S^2`, sampled on a
//! Gauss–Legendre × uniform grid.
//!
//! Basis: `Y_l0 = P̄_l^0(cos θ)/√(2π)`, `Y_lm = P̄_l^m cos(mφ)/√π` and
//! `Y_l,-m = P̄_l^m sin(mφ)/√π` for `m > 0`, where `P̄_l^m` is normalized to
//! unit `L^2` norm on `[-1, 1]`. Node index is `ring * nphi + k`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::expansion::{HarmonicExpansion, Representation};
use super::quadrature::{gauss_jacobi, QuadratureRule};
use crate::error::{Error, Result};

/// Normalized associated Legendre values and θ-derivatives at one colatitude,
/// stored at `l(l+1)/2 + m`.
#[derive(Debug, Clone)]
pub struct AssociatedLegendre {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

#[inline]
pub fn tri_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

impl AssociatedLegendre {
    /// Values at `x = cos θ`, `s = sin θ > 0`. With `derivatives = false` the
    /// derivative tables are left empty.
    pub fn new(lmax: usize, x: f64, s: f64, derivatives: bool) -> Self {
        let len = tri_index(lmax, lmax) + 1;
        let mut p = vec![0.0; len];
        let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
        for m in 0..=lmax {
            if m > 0 {
                let mf = m as f64;
                pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            p[tri_index(m, m)] = pmm;
            if m < lmax {
                p[tri_index(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
            }
            for l in (m + 2)..=lmax {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
                p[tri_index(l, m)] = a * (x * p[tri_index(l - 1, m)] - b * p[tri_index(l - 2, m)]);
            }
        }
        if !derivatives {
            return Self {
                p,
                dp: Vec::new(),
                d2p: Vec::new(),
            };
        }
        let mut dp = vec![0.0; len];
        let mut d2p = vec![0.0; len];
        for m in 0..=lmax {
            for l in m..=lmax {
                let (lf, mf) = (l as f64, m as f64);
                let alpha = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0).max(1.0)).sqrt();
                let (prev, dprev) = if l > m {
                    (p[tri_index(l - 1, m)], dp[tri_index(l - 1, m)])
                } else {
                    (0.0, 0.0)
                };
                let cur = p[tri_index(l, m)];
                let num = lf * x * cur - alpha * prev;
                let d1 = num / s;
                let dnum = -lf * s * cur + lf * x * d1 - alpha * dprev;
                dp[tri_index(l, m)] = d1;
                d2p[tri_index(l, m)] = dnum / s - d1 * x / s;
            }
        }
        Self { p, dp, d2p }
    }
}

#[inline]
fn order_norm(m: usize) -> f64 {
    if m == 0 {
        1.0 / (2.0 * PI).sqrt()
    } else {
        1.0 / PI.sqrt()
    }
}

/// Analysis/synthesis operator between grid samples and a degree-`lmax` expansion.
#[derive(Debug, Clone)]
pub struct SphereTransform {
    lmax: usize,
    ntheta: usize,
    nphi: usize,
    x: Vec<f64>,
    sin_theta: Vec<f64>,
    ring_weight: Vec<f64>,
    tables: Vec<AssociatedLegendre>,
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
    rule: QuadratureRule,
}

impl SphereTransform {
    /// Needs `ntheta > lmax` and `nphi > 2 lmax` so that products of two
    /// band-limited functions are integrated exactly.
    pub fn new(lmax: usize, ntheta: usize, nphi: usize) -> Result<Self> {
        if ntheta < lmax + 1 || nphi < 2 * lmax + 1 {
            return Err(Error::Domain(format!(
                "grid {ntheta}x{nphi} cannot resolve degree {lmax} (need ntheta > {lmax}, nphi > {})",
                2 * lmax
            )));
        }
        let (x, wx) = gauss_jacobi(ntheta, 0.0, 0.0)?;
        let dphi = 2.0 * PI / nphi as f64;
        let sin_theta: Vec<f64> = x.iter().map(|v| (1.0 - v * v).sqrt()).collect();
        let ring_weight = wx.iter().map(|w| w * dphi).collect();
        let tables = x
            .par_iter()
            .zip(sin_theta.par_iter())
            .map(|(xj, sj)| AssociatedLegendre::new(lmax, *xj, *sj, true))
            .collect();
        let mut cos_tab = vec![0.0; nphi * (lmax + 1)];
        let mut sin_tab = vec![0.0; nphi * (lmax + 1)];
        for k in 0..nphi {
            let phi = dphi * k as f64;
            for m in 0..=lmax {
                cos_tab[k * (lmax + 1) + m] = (m as f64 * phi).cos();
                sin_tab[k * (lmax + 1) + m] = (m as f64 * phi).sin();
            }
        }
        Ok(Self {
            lmax,
            ntheta,
            nphi,
            x,
            sin_theta,
            ring_weight,
            tables,
            cos_tab,
            sin_tab,
            rule: QuadratureRule::sphere(ntheta, nphi)?,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.lmax
    }

    pub fn grid_shape(&self) -> (usize, usize) {
        (self.ntheta, self.nphi)
    }

    pub fn len(&self) -> usize {
        self.ntheta * self.nphi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    /// Unit vector of node `i`.
    pub fn node(&self, i: usize) -> [f64; 3] {
        match self.rule.nodes() {
            super::quadrature::Nodes::Sphere(v) => v[i],
            super::quadrature::Nodes::Interval(_) => unreachable!(),
        }
    }

    /// `(θ, φ)` of node `i`.
    pub fn node_angles(&self, i: usize) -> (f64, f64) {
        let (j, k) = (i / self.nphi, i % self.nphi);
        (self.x[j].acos(), 2.0 * PI * k as f64 / self.nphi as f64)
    }

    /// Orthonormal tangent frame `(e_θ, e_φ)` at node `i`.
    pub fn node_frame(&self, i: usize) -> ([f64; 3], [f64; 3]) {
        let (theta, phi) = self.node_angles(i);
        frame(theta, phi)
    }

    fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::SizeMismatch(format!(
                "expected {} grid samples, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(())
    }

    fn check_expansion(&self, e: &HarmonicExpansion) -> Result<()> {
        if e.representation() != Representation::Grid || e.dim() != 3 {
            return Err(Error::RepresentationMismatch(
                "sphere transform needs a grid expansion on S^2".into(),
            ));
        }
        if e.max_degree() > self.lmax {
            return Err(Error::Domain(format!(
                "expansion degree {} exceeds transform degree {}",
                e.max_degree(),
                self.lmax
            )));
        }
        Ok(())
    }

    /// Quadrature projection onto degrees `<= lmax`.
    pub fn analyze(&self, values: &[f64]) -> Result<HarmonicExpansion> {
        self.check_len(values)?;
        let lmax = self.lmax;
        let per_ring: Vec<Vec<f64>> = (0..self.ntheta)
            .into_par_iter()
            .map(|j| {
                let ring = &values[j * self.nphi..(j + 1) * self.nphi];
                let mut cm = vec![0.0; lmax + 1];
                let mut sm = vec![0.0; lmax + 1];
                for (k, f) in ring.iter().enumerate() {
                    let row = k * (lmax + 1);
                    for m in 0..=lmax {
                        cm[m] += f * self.cos_tab[row + m];
                        sm[m] += f * self.sin_tab[row + m];
                    }
                }
                let w = self.ring_weight[j];
                let tab = &self.tables[j].p;
                let mut out = vec![0.0; (lmax + 1) * (lmax + 1)];
                for m in 0..=lmax {
                    let nm = order_norm(m) * w;
                    for l in m..=lmax {
                        let pv = tab[tri_index(l, m)] * nm;
                        out[l * l + l + m] += pv * cm[m];
                        if m > 0 {
                            out[l * l + l - m] += pv * sm[m];
                        }
                    }
                }
                out
            })
            .collect();
        let mut coeffs = vec![0.0; (lmax + 1) * (lmax + 1)];
        for ring in &per_ring {
            for (c, r) in coeffs.iter_mut().zip(ring) {
                *c += r;
            }
        }
        HarmonicExpansion::from_coefficients(3, Representation::Grid, lmax, coeffs)
    }

    /// Projection plus the relative energy left above `lmax`.
    pub fn analyze_with_residual(&self, values: &[f64]) -> Result<(HarmonicExpansion, f64)> {
        let e = self.analyze(values)?;
        let back = self.synthesize(&e)?;
        let total = self.integrate_squares(values);
        let resid: f64 = back
            .iter()
            .zip(values)
            .zip(self.weights())
            .map(|((b, v), w)| w * (v - b) * (v - b))
            .sum();
        let rel = if total > 0.0 { resid / total } else { 0.0 };
        Ok((e, rel))
    }

    fn integrate_squares(&self, values: &[f64]) -> f64 {
        values.iter().zip(self.weights()).map(|(v, w)| w * v * v).sum()
    }

    /// Per-ring Fourier amplitudes `(A_m, B_m)` for value and θ-derivatives.
    fn ring_amplitudes(&self, e: &HarmonicExpansion, j: usize, order: usize) -> [Vec<f64>; 6] {
        let lmax = e.max_degree();
        let c = e.coefficients();
        let tab = &self.tables[j];
        let mut out: [Vec<f64>; 6] = Default::default();
        for v in out.iter_mut() {
            *v = vec![0.0; lmax + 1];
        }
        let tables: [&Vec<f64>; 3] = [&tab.p, &tab.dp, &tab.d2p];
        for m in 0..=lmax {
            let nm = order_norm(m);
            for l in m..=lmax {
                let ci = c[l * l + l + m] * nm;
                let si = if m > 0 { c[l * l + l - m] * nm } else { 0.0 };
                let ti = tri_index(l, m);
                for d in 0..=order {
                    let pv = tables[d][ti];
                    out[2 * d][m] += ci * pv;
                    out[2 * d + 1][m] += si * pv;
                }
            }
        }
        out
    }

    /// Grid samples of the expansion.
    pub fn synthesize(&self, e: &HarmonicExpansion) -> Result<Vec<f64>> {
        self.check_expansion(e)?;
        let lmax = e.max_degree();
        let stride = self.lmax + 1;
        let rings: Vec<Vec<f64>> = (0..self.ntheta)
            .into_par_iter()
            .map(|j| {
                let amp = self.ring_amplitudes(e, j, 0);
                (0..self.nphi)
                    .map(|k| {
                        let row = k * stride;
                        (0..=lmax)
                            .map(|m| amp[0][m] * self.cos_tab[row + m] + amp[1][m] * self.sin_tab[row + m])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(rings.concat())
    }

    /// Restricted Hessian `D²f = ∇²_S f + f I` at every node, in the frame
    /// `(e_θ, e_φ)`, as `[H_θθ, H_θφ, H_φφ]`.
    pub fn restricted_hessians(&self, e: &HarmonicExpansion) -> Result<Vec<[f64; 3]>> {
        self.check_expansion(e)?;
        let lmax = e.max_degree();
        let stride = self.lmax + 1;
        let rings: Vec<Vec<[f64; 3]>> = (0..self.ntheta)
            .into_par_iter()
            .map(|j| {
                let [a, b, a1, b1, a2, b2] = self.ring_amplitudes(e, j, 2);
                let s = self.sin_theta[j];
                let cot = self.x[j] / s;
                (0..self.nphi)
                    .map(|k| {
                        let row = k * stride;
                        let mut d = Derivs::default();
                        for m in 0..=lmax {
                            let (cs, sn) = (self.cos_tab[row + m], self.sin_tab[row + m]);
                            d.accumulate(m as f64, cs, sn, [a[m], b[m], a1[m], b1[m], a2[m], b2[m]]);
                        }
                        d.hessian(s, cot)
                    })
                    .collect()
            })
            .collect();
        Ok(rings.concat())
    }

    /// Value and ambient 3×3 restricted Hessian at an arbitrary unit vector
    /// (off the poles).
    pub fn evaluate_at(&self, e: &HarmonicExpansion, u: [f64; 3]) -> Result<(f64, [[f64; 3]; 3])> {
        self.check_expansion(e)?;
        evaluate_expansion_at(e, u)
    }
}

#[derive(Default)]
struct Derivs {
    h: f64,
    ht: f64,
    htt: f64,
    hp: f64,
    hpp: f64,
    htp: f64,
}

impl Derivs {
    #[inline]
    fn accumulate(&mut self, m: f64, cs: f64, sn: f64, amp: [f64; 6]) {
        let [a, b, a1, b1, a2, b2] = amp;
        self.h += a * cs + b * sn;
        self.ht += a1 * cs + b1 * sn;
        self.htt += a2 * cs + b2 * sn;
        self.hp += m * (-a * sn + b * cs);
        self.hpp += -m * m * (a * cs + b * sn);
        self.htp += m * (-a1 * sn + b1 * cs);
    }

    fn hessian(&self, s: f64, cot: f64) -> [f64; 3] {
        [
            self.htt + self.h,
            (self.htp - cot * self.hp) / s,
            self.hpp / (s * s) + cot * self.ht + self.h,
        ]
    }
}

/// Tangent frame `(e_θ, e_φ)` at spherical angles `(θ, φ)`.
pub fn frame(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([ct * cp, ct * sp, -st], [-sp, cp, 0.0])
}

/// Lifts a frame Hessian `[H_θθ, H_θφ, H_φφ]` to an ambient 3×3 matrix.
pub fn ambient_from_frame(h: [f64; 3], et: [f64; 3], ep: [f64; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = h[0] * et[r] * et[c] + h[1] * (et[r] * ep[c] + ep[r] * et[c]) + h[2] * ep[r] * ep[c];
        }
    }
    out
}

/// Evaluates a grid expansion and its ambient restricted Hessian at `u`.
pub fn evaluate_expansion_at(e: &HarmonicExpansion, u: [f64; 3]) -> Result<(f64, [[f64; 3]; 3])> {
    let r = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let x = (u[2] / r).clamp(-1.0, 1.0);
    let s = (1.0 - x * x).sqrt();
    if s < 1e-12 {
        return Err(Error::Domain("point evaluation at a pole".into()));
    }
    let phi = u[1].atan2(u[0]);
    let lmax = e.max_degree();
    let tab = AssociatedLegendre::new(lmax, x, s, true);
    let c = e.coefficients();
    let mut d = Derivs::default();
    for m in 0..=lmax {
        let nm = order_norm(m);
        let mut amp = [0.0; 6];
        for l in m..=lmax {
            let ci = c[l * l + l + m] * nm;
            let si = if m > 0 { c[l * l + l - m] * nm } else { 0.0 };
            let ti = tri_index(l, m);
            amp[0] += ci * tab.p[ti];
            amp[1] += si * tab.p[ti];
            amp[2] += ci * tab.dp[ti];
            amp[3] += si * tab.dp[ti];
            amp[4] += ci * tab.d2p[ti];
            amp[5] += si * tab.d2p[ti];
        }
        let (sn, cs) = (m as f64 * phi).sin_cos();
        d.accumulate(m as f64, cs, sn, amp);
    }
    let h = d.hessian(s, x / s);
    let (et, ep) = frame(x.acos(), phi);
    Ok((d.h, ambient_from_frame(h, et, ep)))
}
