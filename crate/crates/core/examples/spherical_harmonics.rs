//! Analysis and synthesis on the S^2 grid, and the Funk–Hecke action of a zonal kernel.

use minkowski_iter::sampling::{random_band_limited, rng};
use minkowski_iter::{convolve, projection_kernel, Domain, Result};

fn main() -> Result<()> {
    let d = Domain::sphere(16, 24, 48)?;
    let f = random_band_limited(&d, &mut rng(1), 10);
    let values = d.synthesize(&f)?;
    let back = d.analyze(&values)?;
    println!("round trip error: {:.2e}", back.sub(&f)?.norm());
    for k in 0..=10 {
        println!("  degree {k:>2}: block norm {:.4}", f.block_norm(k));
    }

    let kernel = projection_kernel(3, 16)?;
    let g = convolve(&f, &kernel)?;
    for k in [0, 2, 4, 6] {
        println!("  degree {k}: |f ∗ |t|/2| / |f| = {:.6} (a_k = {:.6})", g.block_norm(k) / f.block_norm(k), kernel.multipliers()[k]);
    }
    Ok(())
}
