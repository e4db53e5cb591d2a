//! Mixed discriminants, area-measure densities `s_i(K, ·)`, and `□_n`.

use nalgebra::DMatrix;

use crate::body::{Body, HessianField};
use crate::error::{Error, Result};
use crate::harmonics::{binomial, box_multiplier, Domain, HarmonicExpansion};

/// Largest matrix size accepted by [`mixed_discriminant`].
pub const MAX_DISCRIMINANT_SIZE: usize = 8;

type Stack = [[f64; MAX_DISCRIMINANT_SIZE]; MAX_DISCRIMINANT_SIZE];

/// `D(A_1, ..., A_k) = (1/k!) Σ_σ det[col_1 A_σ(1) | ... | col_k A_σ(k)]`.
pub fn mixed_discriminant(matrices: &[DMatrix<f64>]) -> Result<f64> {
    let k = matrices.len();
    if k == 0 || k > MAX_DISCRIMINANT_SIZE {
        return Err(Error::SizeMismatch(format!(
            "need between 1 and {MAX_DISCRIMINANT_SIZE} matrices, got {k}"
        )));
    }
    for (j, m) in matrices.iter().enumerate() {
        if m.nrows() != k || m.ncols() != k {
            return Err(Error::SizeMismatch(format!(
                "matrix {j} is {}x{}, expected {k}x{k}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut total = 0.0;
    let mut count = 0usize;
    let mut visit = |p: &[usize]| {
        let mut a: Stack = [[0.0; MAX_DISCRIMINANT_SIZE]; MAX_DISCRIMINANT_SIZE];
        for (col, &src) in p.iter().enumerate() {
            for (row, r) in a.iter_mut().enumerate().take(k) {
                r[col] = matrices[src][(row, col)];
            }
        }
        total += det_stack(&mut a, k);
        count += 1;
    };
    heap_permutations(&mut perm, &mut visit);
    Ok(total / count as f64)
}

/// `D(A, B)` for symmetric 2×2 matrices stored as `[a_11, a_12, a_22]`.
#[inline]
pub fn mixed_discriminant_sym2(a: [f64; 3], b: [f64; 3]) -> f64 {
    0.5 * (a[0] * b[2] + a[2] * b[0] - 2.0 * a[1] * b[1])
}

fn heap_permutations(p: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = p.len();
    let mut c = vec![0usize; n];
    visit(p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn det_stack(a: &mut Stack, k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let d = a[col][col];
        det *= d;
        for row in (col + 1)..k {
            let f = a[row][col] / d;
            if f != 0.0 {
                for c in col..k {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    det
}

/// Density `s_i(K, ·)` of the `i`-th area measure of a body.
#[derive(Debug, Clone)]
pub struct AreaDensity {
    degree: usize,
    domain: Domain,
    values: Vec<f64>,
    expansion: HarmonicExpansion,
    mass: f64,
}

impl AreaDensity {
    /// Wraps node samples of a density on `domain`.
    pub fn from_values(domain: &Domain, degree: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::SizeMismatch(format!(
                "expected {} density samples, got {}",
                domain.len(),
                values.len()
            )));
        }
        let expansion = domain.analyze(&values)?;
        let mass = domain.integrate(&values);
        Ok(Self {
            degree,
            domain: domain.clone(),
            values,
            expansion,
            mass,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Projection onto degrees `<= K_max`.
    pub fn expansion(&self) -> &HarmonicExpansion {
        &self.expansion
    }

    /// `∫ s_i = ω_n π_0 s_i`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `π_0 s_i`, the spherical mean.
    pub fn mean(&self) -> f64 {
        self.mass / self.domain.total_mass()
    }

    /// `∫ u s_i(u) du`; vanishes for every area measure.
    pub fn centroid(&self) -> Vec<f64> {
        self.domain.first_moment(&self.values)
    }

    /// `max |s_i - c|` over the nodes.
    pub fn sup_deviation(&self, c: f64) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max((v - c).abs()))
    }

    /// `(1/2) ∫ |s_i - c|`: total variation distance to `c` times the sphere measure.
    pub fn tv_to_constant(&self, c: f64) -> f64 {
        0.5 * self
            .values
            .iter()
            .zip(self.domain.weights())
            .map(|(v, w)| w * (v - c).abs())
            .sum::<f64>()
    }
}

/// `s_i(K, ·) = D(D²h_K[i], Id[n-1-i])` at every node (`0 <= i <= n-1`).
///
/// Grid bodies use the 2×2 mixed discriminant nodewise; zonal bodies use
/// `s_i = [C(n-2,i) μ^i + C(n-2,i-1) μ^{i-1} ν] / C(n-1,i)` with the
/// Hessian eigenvalues `ν` (once) and `μ` (`n-2` times).
pub fn area_density(body: &Body, i: usize) -> Result<AreaDensity> {
    let n = body.dim();
    if i > n - 1 {
        return Err(Error::Domain(format!("area measure degree {i} exceeds n-1 = {}", n - 1)));
    }
    let values: Vec<f64> = match body.hessians() {
        HessianField::Grid(h) => {
            let id = [1.0, 0.0, 1.0];
            h.iter()
                .map(|hh| match i {
                    0 => 1.0,
                    1 => mixed_discriminant_sym2(*hh, id),
                    _ => mixed_discriminant_sym2(*hh, *hh),
                })
                .collect()
        }
        HessianField::Zonal(pairs) => {
            let (ni, ii) = (n as i64, i as i64);
            let c0 = binomial(ni - 2, ii);
            let c1 = binomial(ni - 2, ii - 1);
            let norm = binomial(ni - 1, ii);
            pairs
                .iter()
                .map(|&(nu, mu)| {
                    if i == 0 {
                        return 1.0;
                    }
                    let lead = mu.powi(i as i32 - 1);
                    (c0 * lead * mu + c1 * lead * nu) / norm
                })
                .collect()
        }
    };
    let max = values.iter().fold(0.0f64, |m, v| m.max(*v));
    let tol = 1e-10 * max;
    if let Some((node, v)) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v < -tol)
        .min_by(|a, b| a.1.total_cmp(b.1))
    {
        return Err(Error::NegativeDensity { value: *v, node });
    }
    AreaDensity::from_values(body.domain(), i, values)
}

/// `□_n f = f + Δ_S f/(n-1)`: block `k` scaled by `(1-k)(k+n-1)/(n-1)`.
pub fn box_n(f: &HarmonicExpansion) -> HarmonicExpansion {
    let n = f.dim();
    f.scale_degrees(|k| box_multiplier(n, k))
}
