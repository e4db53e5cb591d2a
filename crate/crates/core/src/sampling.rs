//! Seeded random inputs: convex bodies, convex zonal profiles, band-limited
//! functions and rotations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::Body;
use crate::error::{Error, Result};
use crate::harmonics::{Domain, HarmonicExpansion};
use crate::profile::Profile;

/// Deterministic generator used by every randomized probe.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Expansion with independent uniform coefficients on degrees `lo..=hi`,
/// damped by `1/(1+l)^decay`.
pub fn random_expansion(domain: &Domain, rng: &mut impl Rng, lo: usize, hi: usize, decay: f64) -> HarmonicExpansion {
    let mut e = domain.zero_expansion();
    for l in lo..=hi.min(domain.max_degree()) {
        let damp = (1.0 + l as f64).powf(-decay);
        for c in e.block_mut(l) {
            *c = rng.random_range(-1.0..1.0) * damp;
        }
    }
    e
}

/// Random band-limited function of degree `<= degree`.
pub fn random_band_limited(domain: &Domain, rng: &mut impl Rng, degree: usize) -> HarmonicExpansion {
    random_expansion(domain, rng, 0, degree, 0.0)
}

/// `1 + a p` with a random perturbation `p` of degrees `1..=degree`,
/// `max|p| = 1`; the amplitude starts at `amplitude` and is halved until the
/// body is convex.
pub fn random_convex_body(domain: &Domain, rng: &mut impl Rng, degree: usize, amplitude: f64) -> Result<Body> {
    let p = random_expansion(domain, rng, 1, degree, 1.0);
    let vals = domain.synthesize(&p)?;
    let sup = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let p = p.scaled(1.0 / sup);
    let one = domain.constant(1.0);
    let mut a = amplitude;
    for _ in 0..40 {
        match Body::from_expansion(domain, one.add(&p.scaled(a))?) {
            Ok(b) => return Ok(b),
            Err(Error::NotConvex { .. } | Error::NotPositive { .. }) => a *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Domain("could not find a convex amplitude".into()))
}

fn profile_is_convex(p: &Profile) -> bool {
    let (e, _) = p.min_eigenvalue(&[]);
    e >= 0.0 && p.min_value().0 > 0.0
}

/// Random even convex profile `Σ c_k P_k^n` (even `k <= degree`, `c_0 = 1`).
/// A random direction is scaled to a random fraction in `[0.3, 0.95]` of the
/// largest convex amplitude, so the samples reach toward the boundary of convexity.
pub fn random_even_convex_profile(n: usize, rng: &mut impl Rng, degree: usize) -> Profile {
    let mut dir = vec![0.0; degree + 1];
    for k in (2..=degree).step_by(2) {
        dir[k] = rng.random_range(-1.0..1.0) / (k * k) as f64;
    }
    let at = |s: f64| {
        let mut c: Vec<f64> = dir.iter().map(|d| d * s).collect();
        c[0] = 1.0;
        Profile::legendre(n, c)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while profile_is_convex(&at(hi)) && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if profile_is_convex(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo * rng.random_range(0.3..0.95))
}

/// Uniformly random rotation from a random unit quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let q = loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            let r = r2.sqrt();
            break v.map(|x| x / r);
        }
    };
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}
