//! Normalized iteration `K_m = γ_m Φ_i^m K` and the probes built on it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::body::Body;
use crate::discriminant::area_density;
use crate::error::{Error, Result};
use crate::valuation::{apply_valuation, image_of_density, is_monotone_degree1, least_squares_slope, Kernel};

/// Iteration stops once `d_2(K_m, B) < 1e-12`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-12;

/// `λK` with `π_0 s_i(λK, ·) = 1` (for `i = 1` this is `π_0 h = 1`), and `λ`.
pub fn normalize(body: &Body, i: usize) -> Result<(Body, f64)> {
    let n = body.dim();
    if i == 0 || i > n - 1 {
        return Err(Error::Domain(format!("degree {i} outside 1..={}", n - 1)));
    }
    let mean = if i == 1 {
        body.mean_support()
    } else {
        area_density(body, i)?.mean()
    };
    if !(mean > 0.0) {
        return Err(Error::ZeroBody(mean));
    }
    let lambda = mean.powf(-1.0 / i as f64);
    Ok((body.scaled(lambda)?, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `i = 1` with a monotone kernel (`□_n g >= 0`), normalized by `1/π_0 h`.
    Degree1,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateOptions {
    pub steps: usize,
    /// Steps applied before recording starts; they still advance `γ_m`.
    pub warmup: usize,
    pub mode: Mode,
}

impl IterateOptions {
    pub fn new(steps: usize, mode: Mode) -> Self {
        Self { steps, warmup: 0, mode }
    }
}

/// Metrics of the normalized iterate `K_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// `ln γ_m` with `K_m = γ_m Φ_i^m K` for the raw (unnormalized) kernel.
    pub log_gamma: f64,
    pub d_h: f64,
    pub d_2: f64,
    /// `‖s_i(K_m, ·) - 1‖_∞`.
    pub sup_density_err: f64,
    /// `d_TV(S_i(K_m, ·), σ)`.
    pub tv: f64,
    /// `V_{i+1}(Φ_i K_m) / V_{i+1}(K_m)^i` for the normalized kernel.
    pub psi: f64,
    /// `d_2(K_m) / d_2(K_{m-1})`.
    pub contraction_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    Converged,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub degree: usize,
    pub mode: Mode,
    pub records: Vec<StepRecord>,
    pub stop: StopReason,
    /// `exp` of the least-squares slope of `ln d_2` over the last half of the trace.
    pub fitted_contraction: Option<f64>,
}

impl IterationTrace {
    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("a trace always has its initial record")
    }

    /// Plot-ready CSV: `step,gamma,d_H,d_2,sup_density_err,tv,psi,contraction_est`.
    /// `gamma` is printed from `ln γ` so that huge exponents do not overflow.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,gamma,d_H,d_2,sup_density_err,tv,psi,contraction_est\n");
        for r in &self.records {
            let c = r.contraction_est.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                r.step,
                format_from_log(r.log_gamma),
                r.d_h,
                r.d_2,
                r.sup_density_err,
                r.tv,
                r.psi,
                c
            );
        }
        out
    }
}

/// Formats `exp(ln_value)` in scientific notation without overflowing.
pub fn format_from_log(ln_value: f64) -> String {
    if !ln_value.is_finite() {
        return format!("{}", ln_value.exp());
    }
    let l10 = ln_value / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut mant = 10f64.powf(l10 - e);
    if mant >= 10.0 - 5e-13 {
        mant /= 10.0;
        e += 1.0;
    }
    format!("{mant:.12}e{}", e as i64)
}

fn distances_to_ball(body: &Body) -> (f64, f64) {
    let w = body.domain().weights();
    let mut sup = 0.0f64;
    let mut sq = 0.0;
    for (h, wi) in body.values().iter().zip(w) {
        let d = h - 1.0;
        sup = sup.max(d.abs());
        sq += wi * d * d;
    }
    (sup, sq.sqrt())
}

fn psi_from(body: &Body, image: &Body, i: usize) -> Result<f64> {
    let v_img = image.intrinsic_volume(i + 1)?;
    let v = body.intrinsic_volume(i + 1)?;
    Ok(v_img / v.powi(i as i32))
}

/// Iterates `K ↦ ξ Φ_i K` with per-step normalization and records the trace.
///
/// Stops early when `d_2 < 1e-12` or when an image fails validation; the
/// trace up to that point is returned with the reason.
pub fn iterate(body: &Body, kernel: &Kernel, i: usize, options: IterateOptions) -> Result<IterationTrace> {
    let n = body.dim();
    if kernel.dim() != n {
        return Err(Error::RepresentationMismatch(format!(
            "kernel for n = {} applied to a body in n = {n}",
            kernel.dim()
        )));
    }
    if i == 0 || i > n - 1 {
        return Err(Error::Domain(format!("degree {i} outside 1..={}", n - 1)));
    }
    if options.mode == Mode::Degree1 {
        if i != 1 {
            return Err(Error::Hypothesis("degree-one mode needs i = 1".into()));
        }
        if is_monotone_degree1(kernel) == Some(false) {
            return Err(Error::Hypothesis("kernel is not monotone: □_n g takes negative values".into()));
        }
    }
    let ln_a0 = kernel.normalization().ln();
    let ifl = i as f64;
    let (mut current, xi0) = normalize(body, i)?;
    let mut log_gamma = xi0.ln();
    for _ in 0..options.warmup {
        let image = apply_valuation(&current, kernel, i)?;
        let (next, xi) = normalize(&image, i)?;
        log_gamma = xi.ln() + ifl * log_gamma - ln_a0;
        current = next;
    }

    let mut records: Vec<StepRecord> = Vec::with_capacity(options.steps + 1);
    let mut stop = StopReason::Completed;
    for m in 0..=options.steps {
        let density = area_density(&current, i)?;
        let (d_h, d_2) = distances_to_ball(&current);
        let mut record = StepRecord {
            step: m,
            log_gamma,
            d_h,
            d_2,
            sup_density_err: density.sup_deviation(1.0),
            tv: density.tv_to_constant(1.0),
            psi: f64::NAN,
            contraction_est: records.last().map(|p: &StepRecord| if p.d_2 > 0.0 { d_2 / p.d_2 } else { 0.0 }),
        };
        let image = match image_of_density(&density, kernel) {
            Ok(b) => b,
            Err(e) => {
                records.push(record);
                stop = StopReason::Failed(e.to_string());
                break;
            }
        };
        record.psi = psi_from(&current, &image, i)?;
        records.push(record);
        if d_2 < CONVERGENCE_TOLERANCE {
            stop = StopReason::Converged;
            break;
        }
        if m == options.steps {
            break;
        }
        let (next, xi) = normalize(&image, i)?;
        log_gamma = xi.ln() + ifl * log_gamma - ln_a0;
        current = next;
    }
    let fitted_contraction = fit_contraction(&records);
    Ok(IterationTrace {
        degree: i,
        mode: options.mode,
        records,
        stop,
        fitted_contraction,
    })
}

/// `exp(slope)` of `ln d_2` against the step over the last half of the trace.
pub fn fit_contraction(records: &[StepRecord]) -> Option<f64> {
    let start = records.len() / 2;
    let pts: Vec<(f64, f64)> = records[start..]
        .iter()
        .filter(|r| r.d_2 > 0.0)
        .map(|r| (r.step as f64, r.d_2.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    Some(least_squares_slope(&pts).exp())
}

/// Relative distance of `Φ_i² K` from the ray through `K`:
/// `min_α ‖h_{Φ_i² K} - α h_K‖_2 / ‖h_K‖_2` (closed-form least squares, `α >= 0`).
pub fn fixed_point_residual(body: &Body, kernel: &Kernel, i: usize) -> Result<(f64, f64)> {
    let twice = apply_valuation(&apply_valuation(body, kernel, i)?, kernel, i)?;
    let w = body.domain().weights();
    let (mut hk, mut kk) = (0.0, 0.0);
    for ((a, b), wi) in twice.values().iter().zip(body.values()).zip(w) {
        hk += wi * a * b;
        kk += wi * b * b;
    }
    let alpha = (hk / kk).max(0.0);
    let r: f64 = twice
        .values()
        .iter()
        .zip(body.values())
        .zip(w)
        .map(|((a, b), wi)| wi * (a - alpha * b).powi(2))
        .sum();
    Ok((r.sqrt() / kk.sqrt(), alpha))
}

/// `ψ(K) = V_{i+1}(Φ_i K) / V_{i+1}(K)^i`.
pub fn psi_ratio(body: &Body, kernel: &Kernel, i: usize) -> Result<f64> {
    let image = apply_valuation(body, kernel, i)?;
    psi_from(body, &image, i)
}

/// Run metadata stored next to a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub kernel_sha256: String,
    pub body_sha256: String,
    #[serde(rename = "K_max")]
    pub k_max: usize,
    pub grid: Option<(usize, usize)>,
    pub seed: Option<u64>,
    pub degree: usize,
    pub steps: usize,
    pub warmup: usize,
}

impl RunMetadata {
    pub fn new(body: &Body, kernel: &Kernel, i: usize, options: &IterateOptions, seed: Option<u64>) -> Result<Self> {
        let grid = match body.domain() {
            crate::harmonics::Domain::Sphere(s) => Some(s.grid_shape()),
            crate::harmonics::Domain::Zonal(_) => None,
        };
        Ok(Self {
            kernel_sha256: sha256_hex(serde_json::to_string(&kernel.to_json())?.as_bytes()),
            body_sha256: sha256_hex(serde_json::to_string(&body.to_json())?.as_bytes()),
            k_max: body.domain().max_degree(),
            grid,
            seed,
            degree: i,
            steps: options.steps,
            warmup: options.warmup,
        })
    }
}

/// JSON mirror of a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub format: u32,
    pub metadata: RunMetadata,
    pub trace: IterationTrace,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_formatting() {
        assert_eq!(format_from_log(0.0), "1.000000000000e0");
        let big = format_from_log(1000.0 * std::f64::consts::LN_10);
        let (m, e) = big.split_once('e').unwrap();
        let m: f64 = m.parse().unwrap();
        let e: i64 = e.parse().unwrap();
        assert!((m * 10f64.powi((e - 1000) as i32) - 1.0).abs() < 1e-11, "{big}");
        let s = format_from_log((2.5e-3f64).ln());
        assert!(s.starts_with("2.5000000000") && s.ends_with("e-3"), "{s}");
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
