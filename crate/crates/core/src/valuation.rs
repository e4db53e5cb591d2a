//! Zonal kernels, Funk–Hecke convolution and the valuations
//! `h_{Φ_i K} = S_i(K, ·) ∗ f`, with the spectral checks that go with them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::body::{Body, Violation};
use crate::discriminant::{area_density, mixed_discriminant_sym2, AreaDensity};
use crate::error::{Error, Result};
use crate::harmonics::{Domain, HarmonicExpansion};
use crate::profile::{Profile, Smoothness};

/// Odd multipliers below this fraction of `a_0` count as zero for parity.
pub const PARITY_TOLERANCE: f64 = 1e-10;
/// Slack for the spectral-gap equality case at `k = 2`.
pub const GAP_EQUALITY_TOLERANCE: f64 = 1e-10;

/// A zonal generating function with its multiplier table, normalized so `a_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    dim: usize,
    name: String,
    profile: Option<Profile>,
    raw: Vec<f64>,
    multipliers: Vec<f64>,
    even: bool,
    smoothness: Smoothness,
}

impl Kernel {
    /// Kernel generated by the body of revolution with support profile `g`.
    /// The profile must be convex (nonnegative `ν`, `μ`) and have `a_0 > 0`.
    pub fn new(n: usize, profile: Profile, kmax: usize, name: &str) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("kernels need n >= 3, got {n}")));
        }
        profile.validate()?;
        let (emin, t) = profile.min_eigenvalue(&[]);
        let tol = 1e-9 * profile.max_eigenvalue().max(f64::MIN_POSITIVE);
        if emin < -tol {
            return Err(Error::NotConvex {
                eigenvalue: emin,
                location: format!("kernel profile t = {t:.6}"),
            });
        }
        let raw = profile.multipliers(n, kmax)?;
        let smoothness = profile.smoothness();
        Self::build(n, name, Some(profile), raw, smoothness)
    }

    /// Kernel given directly by raw multipliers `a_0..a_K` (no profile, no convexity check).
    pub fn from_multipliers(n: usize, raw: Vec<f64>, smoothness: Smoothness, name: &str) -> Result<Self> {
        if n < 3 || raw.is_empty() {
            return Err(Error::Domain("kernel needs n >= 3 and at least one multiplier".into()));
        }
        Self::build(n, name, None, raw, smoothness)
    }

    fn build(n: usize, name: &str, profile: Option<Profile>, raw: Vec<f64>, smoothness: Smoothness) -> Result<Self> {
        let a0 = raw[0];
        if !(a0 > 0.0) {
            return Err(Error::ZeroMass(a0));
        }
        let multipliers: Vec<f64> = raw.iter().map(|a| a / a0).collect();
        let even = multipliers.iter().skip(1).step_by(2).all(|a| a.abs() <= PARITY_TOLERANCE);
        Ok(Self {
            dim: n,
            name: name.to_string(),
            profile,
            raw,
            multipliers,
            even,
            smoothness,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn profile(&self) -> Option<&Profile> {
        self.profile.as_ref()
    }

    pub fn max_degree(&self) -> usize {
        self.multipliers.len() - 1
    }

    /// Raw multipliers `a_k^n[g]`.
    pub fn raw_multipliers(&self) -> &[f64] {
        &self.raw
    }

    /// `a_k / a_0`.
    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    /// Raw `a_0 = ∫_{S^{n-1}} g`, kept for mean-width bookkeeping.
    pub fn normalization(&self) -> f64 {
        self.raw[0]
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Copy with one normalized multiplier replaced.
    pub fn with_multiplier(&self, k: usize, value: f64) -> Result<Self> {
        if k > self.max_degree() {
            return Err(Error::Domain(format!("degree {k} beyond kernel degree {}", self.max_degree())));
        }
        let mut raw = self.raw.clone();
        raw[k] = value * self.raw[0];
        let mut out = Self::build(self.dim, &format!("{}-edited", self.name), self.profile.clone(), raw, self.smoothness)?;
        out.profile = None;
        Ok(out)
    }

    pub fn to_json(&self) -> KernelJson {
        let samples = self.profile.as_ref().map(|p| {
            let t: Vec<f64> = (0..=64).map(|i| -1.0 + 2.0 * i as f64 / 64.0).collect();
            let g = t.iter().map(|x| p.value(*x)).collect();
            ProfileTable { t, g }
        });
        KernelJson {
            format: 1,
            dim_n: self.dim,
            name: self.name.clone(),
            profile: self.profile.clone(),
            profile_samples: samples,
            multipliers: self.multipliers.clone(),
            normalization: self.raw[0],
            parity: if self.even { "even".into() } else { "none".into() },
            smoothness: self.smoothness,
        }
    }

    /// Rebuilds a kernel from its serialized multipliers (which may have been edited).
    pub fn from_json(json: &KernelJson) -> Result<Self> {
        if json.format != 1 {
            return Err(Error::Config(format!("unsupported kernel format {}", json.format)));
        }
        if !(json.normalization > 0.0) {
            return Err(Error::ZeroMass(json.normalization));
        }
        let raw = json.multipliers.iter().map(|a| a * json.normalization).collect();
        let mut k = Self::build(json.dim_n, &json.name, None, raw, json.smoothness)?;
        k.profile = json.profile.clone();
        Ok(k)
    }
}

/// JSON form of a kernel (format 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelJson {
    pub format: u32,
    pub dim_n: usize,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_samples: Option<ProfileTable>,
    pub multipliers: Vec<f64>,
    pub normalization: f64,
    pub parity: String,
    pub smoothness: Smoothness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub t: Vec<f64>,
    pub g: Vec<f64>,
}

/// Kernel generated by the body of revolution with profile `g`.
pub fn make_kernel(n: usize, profile: Profile, kmax: usize) -> Result<Kernel> {
    Kernel::new(n, profile, kmax, "kernel")
}

/// `|t|/2`: generates the projection-body valuations.
pub fn projection_kernel(n: usize, kmax: usize) -> Result<Kernel> {
    Kernel::new(n, Profile::cosine(), kmax, "projection")
}

/// Constant profile: every valuation collapses to a multiple of the ball.
pub fn ball_kernel(n: usize, kmax: usize) -> Result<Kernel> {
    Kernel::new(n, Profile::ball(1.0), kmax, "ball")
}

/// Degree-`k` block scaled by the normalized multiplier `a_k`.
pub fn convolve(f: &HarmonicExpansion, kernel: &Kernel) -> Result<HarmonicExpansion> {
    if f.dim() != kernel.dim() {
        return Err(Error::RepresentationMismatch(format!(
            "function on S^{} convolved with a kernel for n = {}",
            f.dim() - 1,
            kernel.dim()
        )));
    }
    if f.max_degree() > kernel.max_degree() {
        return Err(Error::Domain(format!(
            "kernel known to degree {} but input has degree {}",
            kernel.max_degree(),
            f.max_degree()
        )));
    }
    Ok(f.scale_degrees(|k| kernel.multipliers[k]))
}

/// Body whose support function is `s ∗ f`.
pub fn image_of_density(density: &AreaDensity, kernel: &Kernel) -> Result<Body> {
    let e = convolve(density.expansion(), kernel)?;
    match Body::from_expansion_raw(density.domain(), e)? {
        Ok(b) => Ok(b),
        Err(Violation::NotConvex { node, eigenvalue }) => Err(Error::ImageNotConvex { node, eigenvalue }),
        Err(Violation::NotPositive { node, value }) => Err(Error::NotPositive {
            value,
            location: format!("image node {node}"),
        }),
    }
}

/// `Φ_i K` with `h_{Φ_i K} = s_i(K, ·) ∗ f`, validated as a support function.
pub fn apply_valuation(body: &Body, kernel: &Kernel, i: usize) -> Result<Body> {
    let n = body.dim();
    if i == 0 || i > n - 1 {
        return Err(Error::Domain(format!("valuation degree {i} outside 1..={}", n - 1)));
    }
    image_of_density(&area_density(body, i)?, kernel)
}

/// One row of a spectral-gap report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEntry {
    pub k: usize,
    /// `(k-1)(n+k-1) |a_k| / a_0`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub dim: usize,
    pub entries: Vec<GapEntry>,
    pub max_ratio: f64,
    /// First degree violating the bound, if any.
    pub violation: Option<usize>,
}

impl GapReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// `(k-1)(n+k-1)|a_k|/a_0` for `2 <= k <= k_max`. Passes iff every ratio is
/// `< 1`, except `k = 2` where equality (within `1e-10`) is allowed.
pub fn spectral_gap_check(kernel: &Kernel, k_max: usize) -> GapReport {
    let n = kernel.dim() as f64;
    let top = k_max.min(kernel.max_degree());
    let entries: Vec<GapEntry> = (2..=top)
        .map(|k| {
            let kf = k as f64;
            GapEntry {
                k,
                ratio: (kf - 1.0) * (n + kf - 1.0) * kernel.multipliers[k].abs(),
            }
        })
        .collect();
    let violation = entries
        .iter()
        .find(|e| if e.k == 2 { e.ratio > 1.0 + GAP_EQUALITY_TOLERANCE } else { e.ratio >= 1.0 })
        .map(|e| e.k);
    GapReport {
        dim: kernel.dim(),
        max_ratio: entries.iter().map(|e| e.ratio).fold(0.0, f64::max),
        entries,
        violation,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeRow {
    pub k: usize,
    /// `a_k^n[g^{(j)}]`.
    pub lhs: f64,
    /// `(2π)^j a_{k+j}^{n-2j}[g]`.
    pub rhs: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub dim: usize,
    pub order: usize,
    pub rows: Vec<DerivativeRow>,
    pub max_relative_error: f64,
}

/// Entries smaller than this fraction of the largest are compared on that scale.
pub const DERIVATIVE_RELATIVE_FLOOR: f64 = 1e-6;

/// Compares `a_k^n[g^{(j)}]` with `(2π)^j a_{k+j}^{n-2j}[g]` for `k <= k_max`,
/// both by independent quadratures. Needs `n >= 2(j+1)`.
///
/// The relative error uses `max(|lhs|, |rhs|, 1e-6 · max_k |lhs_k|)` as the
/// denominator so that entries which vanish by parity are not divided by noise.
pub fn derivative_multiplier_check(profile: &Profile, n: usize, j: usize, k_max: usize) -> Result<DerivativeReport> {
    if n < 2 * (j + 1) {
        return Err(Error::Hypothesis(format!("n = {n} must be at least 2(j+1) = {}", 2 * (j + 1))));
    }
    let lhs = profile.derivative_multipliers(n, j, k_max)?;
    let low = profile.multipliers(n - 2 * j, k_max + j)?;
    let factor = (2.0 * PI).powi(j as i32);
    let scale = lhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rows: Vec<DerivativeRow> = (0..=k_max)
        .map(|k| {
            let (l, r) = (lhs[k], factor * low[k + j]);
            let denom = l.abs().max(r.abs()).max(DERIVATIVE_RELATIVE_FLOOR * scale);
            DerivativeRow {
                k,
                lhs: l,
                rhs: r,
                relative_error: if denom > 0.0 { (l - r).abs() / denom } else { 0.0 },
            }
        })
        .collect();
    Ok(DerivativeReport {
        dim: n,
        order: j,
        max_relative_error: rows.iter().map(|r| r.relative_error).fold(0.0, f64::max),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub smoothness: Smoothness,
    /// Least-squares slope of `log|a_k|` against `log k` over `k in [8, K]`.
    pub slope: Option<f64>,
    /// `-(m + (n-2)/2) + 0.5` for a `C^m` kernel.
    pub bound: Option<f64>,
    /// Largest normalized multiplier beyond the band limit.
    pub max_beyond_band: Option<f64>,
    pub pass: bool,
}

/// Lower end of the decay fit.
pub const DECAY_FIT_START: usize = 8;

/// Multiplier decay against the declared smoothness.
pub fn decay_profile(kernel: &Kernel) -> DecayReport {
    let n = kernel.dim() as f64;
    let a = kernel.multipliers();
    let kmax = kernel.max_degree();
    let pts: Vec<(f64, f64)> = (DECAY_FIT_START..=kmax)
        .filter(|&k| a[k].abs() > 1e-13)
        .map(|k| ((k as f64).ln(), a[k].abs().ln()))
        .collect();
    let slope = if pts.len() >= 3 { Some(least_squares_slope(&pts)) } else { None };
    match kernel.smoothness() {
        Smoothness::BandLimited(d) => {
            let beyond = a.iter().skip(d + 1).fold(0.0f64, |m, v| m.max(v.abs()));
            DecayReport {
                smoothness: kernel.smoothness(),
                slope,
                bound: None,
                max_beyond_band: Some(beyond),
                pass: beyond < 1e-12,
            }
        }
        Smoothness::Finite(m) => {
            let bound = -(m as f64 + (n - 2.0) / 2.0) + 0.5;
            DecayReport {
                smoothness: kernel.smoothness(),
                slope,
                bound: Some(bound),
                max_beyond_band: None,
                pass: slope.is_some_and(|s| s <= bound),
            }
        }
        Smoothness::Analytic => DecayReport {
            smoothness: kernel.smoothness(),
            slope,
            bound: None,
            max_beyond_band: None,
            pass: true,
        },
    }
}

/// Slope of the least-squares line through `(x, y)` points.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `λ_g = sup_{2<=k<=K} |(1-k)(k+n-1)/(n-1) a_k|`: the contraction factor of
/// the normalized degree-one iteration.
pub fn lambda_degree1(kernel: &Kernel) -> f64 {
    let n = kernel.dim();
    (2..=kernel.max_degree())
        .map(|k| (crate::harmonics::box_multiplier(n, k) * kernel.multipliers[k]).abs())
        .fold(0.0, f64::max)
}

/// Whether `□_n g >= 0` on the profile scan (monotone degree-one valuation).
/// `None` for kernels without a profile.
pub fn is_monotone_degree1(kernel: &Kernel) -> Option<bool> {
    let p = kernel.profile()?;
    let n = kernel.dim() as f64;
    let ok = p.scan_points().iter().all(|t| {
        let (nu, mu) = p.hessian_eigenvalues(*t);
        ((n - 2.0) * mu + nu) / (n - 1.0) >= -1e-12
    });
    Some(ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaReport {
    /// `Λ_L = sup_{2<=k<=K} (k-1)(k+n-1)/(n-1) |a_k|`.
    pub lambda: f64,
    pub i_lambda: f64,
    pub contracting: bool,
}

/// `Λ_L` and whether `i Λ_L < 1`. Equality within [`GAP_EQUALITY_TOLERANCE`]
/// counts as not contracting.
pub fn lambda_degree_i(kernel: &Kernel, i: usize) -> LambdaReport {
    let n = kernel.dim() as f64;
    let lambda = (2..=kernel.max_degree())
        .map(|k| {
            let kf = k as f64;
            (kf - 1.0) * (kf + n - 1.0) / (n - 1.0) * kernel.multipliers[k].abs()
        })
        .fold(0.0, f64::max);
    let i_lambda = i as f64 * lambda;
    LambdaReport {
        lambda,
        i_lambda,
        contracting: i_lambda < 1.0 - GAP_EQUALITY_TOLERANCE,
    }
}

/// Norms entering the mixed-discriminant bounds for `T_L` on `S^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminantBoundProbe {
    /// `‖D(D²T f_1, D²T f_2)‖_2`.
    pub lhs_l2: f64,
    /// `‖D(D²T f_1, D²T f_2)‖_∞` on the grid.
    pub lhs_sup: f64,
    pub f1_l2: f64,
    pub f1_sup: f64,
    pub f2_sup: f64,
    /// Normalized `a_0` (always 1).
    pub a0: f64,
}

impl DiscriminantBoundProbe {
    /// `(a_0/(n-1)) ‖f_1‖_2 ‖f_2‖_∞` at `n = 3`, as stated for the `L^2` bound.
    pub fn bound_l2_stated(&self) -> f64 {
        self.a0 / 2.0 * self.f1_l2 * self.f2_sup
    }

    /// `a_0 ‖f_1‖_2 ‖f_2‖_∞`: what the pointwise estimate
    /// `|D| <= □_n T_L|f_1| ∏‖f_k‖_∞` yields.
    pub fn bound_l2_pointwise(&self) -> f64 {
        self.a0 * self.f1_l2 * self.f2_sup
    }

    /// `a_0^{n-1} ‖f_1‖_∞ ‖f_2‖_∞` at `n = 3`.
    pub fn bound_sup(&self) -> f64 {
        self.a0 * self.a0 * self.f1_sup * self.f2_sup
    }
}

/// Evaluates `D(D²T_L f_1, D²T_L f_2)` nodewise on an `S^2` grid for the
/// normalized kernel and returns the norms needed by the bounds.
pub fn discriminant_bound_probe(
    domain: &Domain,
    kernel: &Kernel,
    f1: &HarmonicExpansion,
    f2: &HarmonicExpansion,
) -> Result<DiscriminantBoundProbe> {
    let Domain::Sphere(s) = domain else {
        return Err(Error::RepresentationMismatch("the bound probe runs on the S^2 grid".into()));
    };
    let h1 = s.restricted_hessians(&convolve(f1, kernel)?)?;
    let h2 = s.restricted_hessians(&convolve(f2, kernel)?)?;
    let d: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| mixed_discriminant_sym2(*a, *b)).collect();
    let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let v1 = s.synthesize(f1)?;
    let v2 = s.synthesize(f2)?;
    let v1sq: Vec<f64> = v1.iter().map(|v| v * v).collect();
    Ok(DiscriminantBoundProbe {
        lhs_l2: domain.integrate(&sq).sqrt(),
        lhs_sup: sup(&d),
        f1_l2: domain.integrate(&v1sq).sqrt(),
        f1_sup: sup(&v1),
        f2_sup: sup(&v2),
        a0: kernel.multipliers()[0],
    })
}
