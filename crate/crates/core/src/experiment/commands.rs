use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;

use super::config::{ExperimentConfig, IterateSection, KernelSpec, MultipliersSection, SweepSection};
use crate::body::Body;
use crate::error::{Error, Result};
use crate::harmonics::ball_volume;
use crate::iterate::{
    fixed_point_residual, iterate, psi_ratio, IterateOptions, IterationTrace, Mode, RunMetadata, StopReason,
    TraceJson,
};
use crate::profile::Profile;
use crate::sampling;
use crate::valuation::{
    decay_profile, derivative_multiplier_check, lambda_degree1, lambda_degree_i, spectral_gap_check, Kernel,
};

/// Relative slack for "nonincreasing" along a trace.
pub const MONOTONE_RELATIVE_SLACK: f64 = 1e-9;
/// Absolute floor below which trace errors are quadrature noise.
pub const NOISE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            pass,
            detail,
        }
    }
}

/// What a command produced and how its checks went.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
    /// A validity failure (non-convex image, negative density) that ended a run early.
    pub invalid: Option<String>,
}

impl Outcome {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    fn merge(&mut self, other: Outcome) {
        self.checks.extend(other.checks);
        self.files.extend(other.files);
        if self.invalid.is_none() {
            self.invalid = other.invalid;
        }
    }
}

fn write_file(out: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = out.join(name);
    if let Some(p) = path.parent() {
        std::fs::create_dir_all(p)?;
    }
    std::fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

fn e12(v: f64) -> String {
    format!("{v:.12e}")
}

/// Kernels, gap ratios, decay fits and derivative-identity residuals.
///
/// Writes `multipliers.csv`, `gap.csv`, `decay.csv`, `derivative.csv` and one
/// kernel file per named kernel under `kernels/`.
pub fn cmd_multipliers(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let section = cfg.multipliers.clone().unwrap_or_else(MultipliersSection::full);
    let mut outcome = Outcome::default();
    let mut table = String::from("n,kernel,k,a_k,a_k_normalized\n");
    let mut gap = String::from("n,kernel,k,ratio\n");
    let mut decay = String::from("n,kernel,smoothness,slope,bound,max_beyond_band,pass\n");
    let mut gap_fail: Option<String> = None;
    let mut gap_worst = 0.0f64;
    let mut decay_fail: Option<String> = None;
    let mut count = 0usize;
    let mut rng = sampling::rng(cfg.seed);

    for &n in &section.dims {
        let mut kernels: Vec<Kernel> = Vec::new();
        for spec in &section.kernels {
            let k = spec.build(n, cfg.k_max, cfg.base())?;
            let name = format!("kernels/{}_n{n}.json", k.name());
            write_file(out, &name, &serde_json::to_string_pretty(&k.to_json())?, &mut outcome.files)?;
            kernels.push(k);
        }
        for r in 0..section.random_profiles {
            let p = sampling::random_even_convex_profile(n, &mut rng, section.random_profile_degree);
            kernels.push(Kernel::new(n, p, cfg.k_max, &format!("random-{r}"))?);
        }
        for k in &kernels {
            count += 1;
            for (deg, (a, b)) in k.raw_multipliers().iter().zip(k.multipliers()).enumerate() {
                let _ = writeln!(table, "{n},{},{deg},{},{}", k.name(), e12(*a), e12(*b));
            }
            let report = spectral_gap_check(k, section.gap_degree);
            for e in &report.entries {
                let _ = writeln!(gap, "{n},{},{},{}", k.name(), e.k, e12(e.ratio));
            }
            gap_worst = gap_worst.max(report.max_ratio);
            if let (None, Some(deg)) = (&gap_fail, report.violation) {
                gap_fail = Some(format!("kernel {} in n = {n} violates the gap at k = {deg}", k.name()));
            }
            let d = decay_profile(k);
            let opt = |v: Option<f64>| v.map(e12).unwrap_or_default();
            let _ = writeln!(
                decay,
                "{n},{},{:?},{},{},{},{}",
                k.name(),
                d.smoothness,
                opt(d.slope),
                opt(d.bound),
                opt(d.max_beyond_band),
                d.pass
            );
            if !d.pass && decay_fail.is_none() {
                decay_fail = Some(format!(
                    "kernel {} in n = {n}: slope {:?} against bound {:?}, beyond band {:?}",
                    k.name(),
                    d.slope,
                    d.bound,
                    d.max_beyond_band
                ));
            }
        }
    }
    outcome.checks.push(Check::new(
        "spectral_gap",
        gap_fail.is_none(),
        gap_fail.unwrap_or_else(|| format!("{count} kernels, largest ratio {gap_worst:.12}")),
    ));
    outcome.checks.push(Check::new(
        "multiplier_decay",
        decay_fail.is_none(),
        decay_fail.unwrap_or_else(|| format!("{count} kernels")),
    ));

    if !section.derivative.is_empty() {
        let mut csv = String::from("n,j,profile,k,lhs,rhs,relative_error\n");
        let mut worst = 0.0f64;
        for &(n, j) in &section.derivative {
            for (pi, p) in section.derivative_profiles.iter().enumerate() {
                let r = derivative_multiplier_check(p, n, j, section.derivative_degree)?;
                for row in &r.rows {
                    let _ = writeln!(
                        csv,
                        "{n},{j},{pi},{},{},{},{}",
                        row.k,
                        e12(row.lhs),
                        e12(row.rhs),
                        e12(row.relative_error)
                    );
                }
                worst = worst.max(r.max_relative_error);
            }
        }
        write_file(out, "derivative.csv", &csv, &mut outcome.files)?;
        outcome.checks.push(Check::new(
            "derivative_identity",
            worst <= section.derivative_tolerance,
            format!("max relative error {worst:.3e} (tolerance {:.0e})", section.derivative_tolerance),
        ));
    }
    write_file(out, "multipliers.csv", &table, &mut outcome.files)?;
    write_file(out, "gap.csv", &gap, &mut outcome.files)?;
    write_file(out, "decay.csv", &decay, &mut outcome.files)?;
    Ok(outcome)
}

/// Whether `v` is nonincreasing from index `start` on, up to relative slack and the noise floor.
pub fn nonincreasing_from(v: &[f64], start: usize) -> Option<usize> {
    (start.max(1)..v.len()).find(|&m| v[m] > v[m - 1] * (1.0 + MONOTONE_RELATIVE_SLACK) + NOISE_FLOOR)
}

fn trace_checks(trace: &IterationTrace, kernel: &Kernel, body: &Body, section: &IterateSection) -> Vec<Check> {
    let rec = &trace.records;
    let mut checks = Vec::new();
    match section.mode {
        Mode::Degree1 => {
            let lambda = lambda_degree1(kernel);
            let d0 = rec[0].d_2;
            let bad = rec
                .iter()
                .find(|r| r.d_2 > lambda.powi(r.step as i32) * d0 * (1.0 + 1e-6) + NOISE_FLOOR);
            checks.push(Check::new(
                "degree1_contraction",
                bad.is_none(),
                match bad {
                    Some(r) => format!("step {}: d_2 = {:.3e} exceeds λ_g^m d_2(0)", r.step, r.d_2),
                    None => format!("λ_g = {lambda:.6}, {} steps", rec.len() - 1),
                },
            ));
            let ln_half_width = body.mean_support().ln();
            let ln_a0 = kernel.normalization().ln();
            let warm = section.warmup as f64;
            let worst = rec
                .iter()
                .map(|r| {
                    let m = warm + r.step as f64;
                    (r.log_gamma + ln_half_width + m * ln_a0).exp_m1().abs()
                })
                .fold(0.0f64, f64::max);
            checks.push(Check::new(
                "gamma_formula",
                worst <= 1e-8,
                format!("max relative deviation of γ_m from (w/2)^-1 (∫g)^-m: {worst:.3e}"),
            ));
        }
        Mode::General => {
            let sd: Vec<f64> = rec.iter().map(|r| r.sup_density_err).collect();
            let dh: Vec<f64> = rec.iter().map(|r| r.d_h).collect();
            let bad = nonincreasing_from(&sd, section.check_warmup).or(nonincreasing_from(&dh, section.check_warmup));
            let reached = rec
                .iter()
                .find(|r| r.sup_density_err < section.target && r.d_h < section.target)
                .map(|r| r.step);
            let bound = lambda_degree_i(kernel, trace.degree).i_lambda + 0.1;
            let ratio_ok = match trace.fitted_contraction {
                Some(c) => c <= bound,
                None => reached == Some(0),
            };
            let pass = bad.is_none() && reached.is_some() && ratio_ok;
            checks.push(Check::new(
                "local_convergence",
                pass,
                format!(
                    "first increase after warmup: {bad:?}; target {:.0e} reached at step {reached:?}; fitted ratio {:?} against i·Λ_L + 0.1 = {bound:.4}",
                    section.target, trace.fitted_contraction
                ),
            ));
            let psi: Vec<f64> = rec.iter().map(|r| r.psi).collect();
            let up = (1..psi.len()).find(|&m| psi[m] > psi[m - 1] + 1e-8 * psi[m - 1].abs());
            checks.push(Check::new(
                "psi_monotone",
                up.is_none(),
                match up {
                    Some(m) => format!("ψ increases at step {m}"),
                    None => format!("ψ from {:.12} to {:.12}", psi[0], psi[psi.len() - 1]),
                },
            ));
        }
    }
    checks
}

/// Runs one iteration and writes `trace.csv` and `trace.json`.
pub fn cmd_iterate(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let section = cfg.iterate.clone().unwrap_or_default();
    let domain = cfg.domain_for(section.dim, section.zonal)?;
    let kernel = section.kernel.build(section.dim, cfg.k_max, cfg.base())?;
    let body = section.body.build(&domain, cfg.seed, cfg.base())?;
    let options = IterateOptions {
        steps: section.steps,
        warmup: section.warmup,
        mode: section.mode,
    };
    let trace = iterate(&body, &kernel, section.degree, options)?;
    let mut outcome = Outcome::default();
    write_file(out, "trace.csv", &trace.to_csv(), &mut outcome.files)?;
    let json = TraceJson {
        format: 1,
        metadata: RunMetadata::new(&body, &kernel, section.degree, &options, Some(cfg.seed))?,
        trace: trace.clone(),
    };
    write_file(out, "trace.json", &serde_json::to_string_pretty(&json)?, &mut outcome.files)?;

    let comparator = match section.mode {
        Mode::Degree1 => format!("λ_g = {:.6}", lambda_degree1(&kernel)),
        Mode::General => format!("i·Λ_L = {:.6}", lambda_degree_i(&kernel, section.degree).i_lambda),
    };
    match trace.fitted_contraction {
        Some(c) => println!("fitted contraction {c:.6}; {comparator}"),
        None => println!("fitted contraction n/a; {comparator}"),
    }
    if let StopReason::Failed(reason) = &trace.stop {
        outcome.invalid = Some(reason.clone());
        return Ok(outcome);
    }
    outcome.checks = trace_checks(&trace, &kernel, &body, &section);
    Ok(outcome)
}

fn sweep_bodies(cfg: &ExperimentConfig, s: &SweepSection) -> Result<Vec<(f64, Body)>> {
    let domain = cfg.sphere()?;
    s.epsilons
        .iter()
        .map(|&eps| {
            let terms: Vec<_> = s.shape.iter().map(|&(l, m, c)| (l, m, eps * c)).collect();
            Ok((eps, Body::perturbed_ball(&domain, &terms)?))
        })
        .collect()
}

/// `min_α d_2(Φ_i² K, αK)/‖h_K‖_2` over an amplitude sweep; writes `fixed_point.csv`.
pub fn cmd_fixed_point(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let s = cfg.fixed_point.clone().unwrap_or_default();
    let bodies = sweep_bodies(cfg, &s)?;
    let mut csv = String::from("kernel,epsilon,residual,alpha\n");
    let mut failure: Option<String> = None;
    for spec in &s.kernels {
        let kernel = spec.build(3, cfg.k_max, cfg.base())?;
        for (eps, body) in &bodies {
            let (res, alpha) = fixed_point_residual(body, &kernel, s.degree)?;
            let _ = writeln!(csv, "{},{eps},{},{}", kernel.name(), e12(res), e12(alpha));
            let ok = if *eps == 0.0 {
                res <= 1e-10
            } else if *eps >= 0.05 {
                res >= 1e-4
            } else {
                res > 1e-8
            };
            if !ok && failure.is_none() {
                failure = Some(format!("kernel {}, ε = {eps}: residual {res:.3e}", kernel.name()));
            }
        }
    }
    let mut outcome = Outcome::default();
    write_file(out, "fixed_point.csv", &csv, &mut outcome.files)?;
    outcome.checks.push(Check::new(
        "fixed_point",
        failure.is_none(),
        failure.unwrap_or_else(|| "residual vanishes only at ε = 0".into()),
    ));
    Ok(outcome)
}

/// `ψ(K) = V_{i+1}(Φ_i K)/V_{i+1}(K)^i` over an amplitude sweep; writes `psi.csv`.
pub fn cmd_psi(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let s = cfg.psi.clone().unwrap_or_default();
    let bodies = sweep_bodies(cfg, &s)?;
    let i = s.degree;
    let psi_ball = ball_volume(3).powi(1 - i as i32);
    let mut csv = String::from("kernel,epsilon,psi,psi_ball,excess\n");
    let mut failure: Option<String> = None;
    for spec in &s.kernels {
        let kernel = spec.build(3, cfg.k_max, cfg.base())?;
        for (eps, body) in &bodies {
            let psi = psi_ratio(body, &kernel, i)?;
            let _ = writeln!(csv, "{},{eps},{},{},{}", kernel.name(), e12(psi), e12(psi_ball), e12(psi - psi_ball));
            let ok = if *eps == 0.0 {
                ((psi - psi_ball) / psi_ball).abs() <= 1e-10
            } else {
                psi >= psi_ball * (1.0 - 1e-8)
            };
            if !ok && failure.is_none() {
                failure = Some(format!("kernel {}, ε = {eps}: ψ = {psi:.12} against ψ(B) = {psi_ball:.12}", kernel.name()));
            }
        }
    }
    let mut outcome = Outcome::default();
    write_file(out, "psi.csv", &csv, &mut outcome.files)?;
    outcome.checks.push(Check::new(
        "psi_minimum",
        failure.is_none(),
        failure.unwrap_or_else(|| format!("ψ >= ψ(B) = {psi_ball:.12} over the sweep")),
    ));
    Ok(outcome)
}

/// Every command with its config section (or default), plus `summary.csv`.
pub fn cmd_verify_all(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let mut all = Outcome::default();
    let runs: [(&str, fn(&ExperimentConfig, &Path) -> Result<Outcome>); 4] = [
        ("multipliers", cmd_multipliers),
        ("iterate", cmd_iterate),
        ("fixed-point", cmd_fixed_point),
        ("psi", cmd_psi),
    ];
    let mut summary = String::from("command,check,pass,detail\n");
    for (name, run) in runs {
        info!("verify-all: {name}");
        let o = run(cfg, &out.join(name))?;
        for c in &o.checks {
            let _ = writeln!(summary, "{name},{},{},\"{}\"", c.name, c.pass, c.detail.replace('"', "'"));
        }
        if let Some(reason) = &o.invalid {
            let _ = writeln!(summary, "{name},validity,false,\"{}\"", reason.replace('"', "'"));
        }
        all.merge(o);
    }
    write_file(out, "summary.csv", &summary, &mut all.files)?;
    Ok(all)
}

impl MultipliersSection {
    /// Projection and `C^2` spline kernels in `n = 3..8`, 20 random even convex
    /// profiles per dimension, and the derivative identity for `(6,1)`, `(8,1)`, `(8,2)`.
    pub fn full() -> Self {
        Self {
            kernels: vec![
                KernelSpec::Projection,
                KernelSpec::Profile {
                    name: "spline-c2".into(),
                    profile: Profile::spline_bump(0.5, 0.3).expect("knot in range"),
                },
            ],
            random_profiles: 20,
            derivative: vec![(6, 1), (8, 1), (8, 2)],
            derivative_profiles: vec![
                Profile::legendre(3, vec![1.0, 0.4, 0.3, -0.2, 0.1, 0.05, -0.02]),
                Profile::spline_bump(0.5, 0.3).expect("knot in range"),
            ],
            ..Self::default()
        }
    }
}

/// Error raised by a command, mapped to an exit code: 3 for numerical validity,
/// 4 for configuration and I/O, 2 for a violated hypothesis, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_numerical_validity() => 3,
        Error::Config(_) | Error::Json(_) | Error::Io(_) => 4,
        Error::Hypothesis(_) => 2,
        _ => 1,
    }
}
