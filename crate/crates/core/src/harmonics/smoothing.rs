//! Smooth spectral cutoffs `M_j` and the `U_α` norm estimator.

use super::expansion::HarmonicExpansion;
use super::legendre::box_multiplier;
use super::Domain;
use crate::error::{Error, Result};

fn bump(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (-1.0 / y).exp()
    }
}

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`, and
/// `ψ(2-x) / (ψ(2-x) + ψ(x-1))` in between with `ψ(y) = exp(-1/y)`.
pub fn theta_cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        let a = bump(2.0 - x);
        a / (a + bump(x - 1.0))
    }
}

/// `M_j f = Σ_k Θ(k/j) π_k f`, band-limited to degree `< 2j`.
pub fn smooth_mj(f: &HarmonicExpansion, j: usize) -> Result<HarmonicExpansion> {
    smooth_mj_with(f, j, theta_cutoff)
}

/// `M_j` with a caller-supplied cutoff profile.
pub fn smooth_mj_with(
    f: &HarmonicExpansion,
    j: usize,
    cutoff: impl Fn(f64) -> f64,
) -> Result<HarmonicExpansion> {
    if j == 0 {
        return Err(Error::Domain("M_j needs j >= 1".into()));
    }
    Ok(f.scale_degrees(|k| cutoff(k as f64 / j as f64)))
}

/// Spectral tail `‖Σ_{l>k} π_l f‖_2` for `k = 0..=K`.
pub fn spectral_tails(f: &HarmonicExpansion) -> Vec<f64> {
    let kmax = f.max_degree();
    let mut tails = vec![0.0; kmax + 1];
    let mut acc = 0.0;
    for k in (0..kmax).rev() {
        acc += f.block_norm(k + 1).powi(2);
        tails[k] = acc.sqrt();
    }
    tails
}

/// Estimator of the `U_α` norm: `max(‖f‖_∞ on the grid, sup_{1<=k<=K} k^α tail_k)`.
/// The best `L^2` approximation by degree-`k` polynomials is the spectral
/// truncation, so `tail_k` is its error. Truncation-dependent; nondecreasing in `K`.
pub fn ualpha_norm_estimate(domain: &Domain, f: &HarmonicExpansion, alpha: f64) -> Result<f64> {
    let values = domain.synthesize(f)?;
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tails = spectral_tails(f);
    let tail_sup = (1..=f.max_degree())
        .map(|k| (k as f64).powf(alpha) * tails[k])
        .fold(0.0f64, f64::max);
    Ok(sup.max(tail_sup))
}

/// Spherical Laplacian via `Δ_S = (n-1)(□_n - Id)`.
pub fn laplacian(f: &HarmonicExpansion) -> HarmonicExpansion {
    let n = f.dim();
    f.scale_degrees(|k| (n as f64 - 1.0) * (box_multiplier(n, k) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(theta_cutoff(0.3), 1.0);
        assert_eq!(theta_cutoff(1.0), 1.0);
        assert_eq!(theta_cutoff(2.0), 0.0);
        assert!((theta_cutoff(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = theta_cutoff(1.0 + i as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }
}
