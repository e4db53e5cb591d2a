use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::body::{Body, BodyJson};
use crate::error::{Error, Result};
use crate::harmonics::{Domain, DEFAULT_GRID, DEFAULT_KMAX};
use crate::iterate::Mode;
use crate::profile::Profile;
use crate::sampling;
use crate::valuation::{ball_kernel, projection_kernel, Kernel, KernelJson};

pub const CONFIG_FORMAT: u32 = 1;

/// One experiment file. Every section is optional; commands fall back to
/// their defaults for missing sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_kmax")]
    pub k_max: usize,
    #[serde(default = "default_grid")]
    pub grid: (usize, usize),
    #[serde(default)]
    pub multipliers: Option<MultipliersSection>,
    #[serde(default)]
    pub iterate: Option<IterateSection>,
    #[serde(default)]
    pub fixed_point: Option<SweepSection>,
    #[serde(default)]
    pub psi: Option<SweepSection>,
    /// Set when the file was read from disk; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_seed() -> u64 {
    1
}

fn default_kmax() -> usize {
    DEFAULT_KMAX
}

fn default_grid() -> (usize, usize) {
    DEFAULT_GRID
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            format: CONFIG_FORMAT,
            seed: default_seed(),
            k_max: default_kmax(),
            grid: default_grid(),
            multipliers: None,
            iterate: None,
            fixed_point: None,
            psi: None,
            base_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipliersSection {
    pub dims: Vec<usize>,
    pub kernels: Vec<KernelSpec>,
    /// Highest degree entering the spectral-gap check.
    #[serde(default = "default_gap_degree")]
    pub gap_degree: usize,
    /// Random even convex profiles per dimension added to the gap check.
    #[serde(default)]
    pub random_profiles: usize,
    #[serde(default = "default_random_degree")]
    pub random_profile_degree: usize,
    /// `(n, j)` pairs for the derivative identity.
    #[serde(default)]
    pub derivative: Vec<(usize, usize)>,
    #[serde(default)]
    pub derivative_profiles: Vec<Profile>,
    #[serde(default = "default_derivative_degree")]
    pub derivative_degree: usize,
    #[serde(default = "default_derivative_tol")]
    pub derivative_tolerance: f64,
}

fn default_gap_degree() -> usize {
    40
}

fn default_random_degree() -> usize {
    8
}

fn default_derivative_degree() -> usize {
    30
}

fn default_derivative_tol() -> f64 {
    1e-8
}

impl Default for MultipliersSection {
    fn default() -> Self {
        Self {
            dims: (3..=8).collect(),
            kernels: vec![KernelSpec::Projection],
            gap_degree: default_gap_degree(),
            random_profiles: 0,
            random_profile_degree: default_random_degree(),
            derivative: vec![],
            derivative_profiles: vec![],
            derivative_degree: default_derivative_degree(),
            derivative_tolerance: default_derivative_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateSection {
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub degree: usize,
    pub steps: usize,
    #[serde(default)]
    pub warmup: usize,
    pub mode: Mode,
    pub kernel: KernelSpec,
    pub body: BodySpec,
    /// Zonal representation even for `n = 3`.
    #[serde(default)]
    pub zonal: bool,
    /// Steps ignored by the monotonicity check (general mode).
    #[serde(default = "default_check_warmup")]
    pub check_warmup: usize,
    /// Error level the trace must reach (general mode).
    #[serde(default = "default_target")]
    pub target: f64,
}

fn default_dim() -> usize {
    3
}

fn default_check_warmup() -> usize {
    3
}

fn default_target() -> f64 {
    1e-8
}

impl Default for IterateSection {
    fn default() -> Self {
        Self {
            dim: 3,
            degree: 2,
            steps: 60,
            warmup: 0,
            mode: Mode::General,
            kernel: KernelSpec::showcase(),
            body: BodySpec::Perturbed {
                terms: vec![(2, 0, 0.05), (4, 0, 0.025)],
            },
            zonal: false,
            check_warmup: default_check_warmup(),
            target: default_target(),
        }
    }
}

/// Amplitude sweep `h = 1 + ε p` for the fixed-point and `ψ` reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub degree: usize,
    pub kernels: Vec<KernelSpec>,
    /// `p = Σ c Y_lm` as `(l, m, c)`.
    pub shape: Vec<(usize, i64, f64)>,
    pub epsilons: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            degree: 2,
            kernels: vec![KernelSpec::showcase()],
            shape: vec![(2, 0, 1.0)],
            epsilons: vec![0.0, 0.01, 0.03, 0.05],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Projection,
    Ball,
    /// Generating function given by a profile; `dim` of a Legendre profile is replaced by `n`.
    Profile { name: String, profile: Profile },
    /// A kernel file written by the `multipliers` command (possibly hand-edited).
    File { path: PathBuf },
}

impl KernelSpec {
    /// Smooth even kernel `1 + 0.2 P_2 + 0.03 P_4` with `i Λ_L = 0.16` at `n = 3`, `i = 2`.
    pub fn showcase() -> Self {
        KernelSpec::Profile {
            name: "smooth-even".into(),
            profile: Profile::legendre(3, vec![1.0, 0.0, 0.2, 0.0, 0.03]),
        }
    }

    pub fn build(&self, n: usize, k_max: usize, base: Option<&Path>) -> Result<Kernel> {
        match self {
            KernelSpec::Projection => projection_kernel(n, k_max),
            KernelSpec::Ball => ball_kernel(n, k_max),
            KernelSpec::Profile { name, profile } => {
                let profile = match profile {
                    Profile::Legendre { coeffs, .. } => Profile::legendre(n, coeffs.clone()),
                    p => p.clone(),
                };
                Kernel::new(n, profile, k_max, name)
            }
            KernelSpec::File { path } => {
                let path = resolve(base, path);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("cannot read kernel file {}: {e}", path.display())))?;
                let json: KernelJson = serde_json::from_str(&text)?;
                let kernel = Kernel::from_json(&json)?;
                if kernel.dim() != n {
                    return Err(Error::Config(format!(
                        "kernel file {} is for n = {}, expected {n}",
                        path.display(),
                        kernel.dim()
                    )));
                }
                Ok(kernel)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        radius: f64,
    },
    /// `1 + Σ c Y_lm` on the `S^2` grid.
    Perturbed {
        terms: Vec<(usize, i64, f64)>,
    },
    /// Body of revolution with the given support profile.
    Profile {
        profile: Profile,
    },
    /// Random smooth perturbation of the ball drawn from the config seed.
    Random {
        degree: usize,
        amplitude: f64,
    },
    File {
        path: PathBuf,
    },
}

impl BodySpec {
    pub fn build(&self, domain: &Domain, seed: u64, base: Option<&Path>) -> Result<Body> {
        match self {
            BodySpec::Ball { radius } => Body::ball(domain, *radius),
            BodySpec::Perturbed { terms } => Body::perturbed_ball(domain, terms),
            BodySpec::Profile { profile } => {
                let profile = match profile {
                    Profile::Legendre { coeffs, .. } => Profile::legendre(domain.dim(), coeffs.clone()),
                    p => p.clone(),
                };
                match domain {
                    Domain::Zonal(_) => Body::zonal(domain, &profile),
                    Domain::Sphere(_) => Body::zonal_on_grid(domain, &profile),
                }
            }
            BodySpec::Random { degree, amplitude } => {
                if matches!(domain, Domain::Zonal(_)) {
                    return Err(Error::Config("random bodies need the S^2 grid".into()));
                }
                sampling::random_convex_body(domain, &mut sampling::rng(seed), *degree, *amplitude)
            }
            BodySpec::File { path } => {
                let path = resolve(base, path);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("cannot read body file {}: {e}", path.display())))?;
                let json: BodyJson = serde_json::from_str(&text)?;
                Body::from_json_on(domain, &json)
            }
        }
    }
}

fn resolve(base: Option<&Path>, path: &Path) -> PathBuf {
    match base {
        Some(b) if path.is_relative() => b.join(path),
        _ => path.to_path_buf(),
    }
}

/// Command-line overrides applied on top of a file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub k_max: Option<usize>,
    pub grid: Option<(usize, usize)>,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) -> Result<()> {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(k) = o.k_max {
            self.k_max = k;
        }
        if let Some(g) = o.grid {
            self.grid = g;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.format != CONFIG_FORMAT {
            return bad(format!("unsupported config format {}, expected {CONFIG_FORMAT}", self.format));
        }
        if !(2..=512).contains(&self.k_max) {
            return bad(format!("k_max = {} outside 2..=512", self.k_max));
        }
        let (nt, np) = self.grid;
        if nt <= self.k_max || np <= 2 * self.k_max {
            return bad(format!(
                "grid {nt}x{np} too coarse for k_max = {}: need ntheta > k_max and nphi > 2 k_max",
                self.k_max
            ));
        }
        if let Some(m) = &self.multipliers {
            if m.dims.is_empty() || m.dims.iter().any(|&n| !(3..=16).contains(&n)) {
                return bad("multipliers.dims must be nonempty and within 3..=16".into());
            }
            if m.kernels.is_empty() && m.random_profiles == 0 {
                return bad("multipliers needs at least one kernel".into());
            }
            if m.gap_degree < 2 || m.gap_degree > self.k_max {
                return bad(format!("gap_degree must lie in 2..=k_max, got {}", m.gap_degree));
            }
            if m.derivative_degree > self.k_max {
                return bad("derivative_degree exceeds k_max".into());
            }
            if !(m.derivative_tolerance > 0.0) {
                return bad("derivative_tolerance must be positive".into());
            }
            if m.random_profiles > 0 && m.random_profile_degree < 2 {
                return bad("random_profile_degree must be at least 2".into());
            }
        }
        if let Some(it) = &self.iterate {
            if !(3..=16).contains(&it.dim) {
                return bad(format!("iterate.dim = {} outside 3..=16", it.dim));
            }
            if it.degree == 0 || it.degree >= it.dim {
                return bad(format!("iterate.degree must lie in 1..={}", it.dim - 1));
            }
            if it.steps == 0 {
                return bad("iterate.steps must be positive".into());
            }
            if !(it.target > 0.0) {
                return bad("iterate.target must be positive".into());
            }
        }
        for (name, s) in [("fixed_point", &self.fixed_point), ("psi", &self.psi)] {
            if let Some(s) = s {
                if s.degree != 2 {
                    return bad(format!("{name}.degree: sweeps run on the S^2 grid, so the degree must be 2"));
                }
                if s.kernels.is_empty() || s.epsilons.is_empty() || s.shape.is_empty() {
                    return bad(format!("{name} needs kernels, shape and epsilons"));
                }
                if s.epsilons.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
                    return bad(format!("{name}.epsilons must be finite and nonnegative"));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> Option<&Path> {
        self.base_dir.as_deref()
    }

    /// `S^2` grid domain with the configured `k_max` and grid.
    pub fn sphere(&self) -> Result<Domain> {
        Domain::sphere(self.k_max, self.grid.0, self.grid.1)
    }

    pub fn domain_for(&self, n: usize, zonal: bool) -> Result<Domain> {
        if n == 3 && !zonal {
            self.sphere()
        } else {
            Domain::zonal(n, self.k_max)
        }
    }
}

/// Parses `NxM`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Config(format!("grid {s:?} is not of the form NxM")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("grid {s:?} is not of the form NxM")))
    };
    Ok((p(a)?, p(b)?))
}
