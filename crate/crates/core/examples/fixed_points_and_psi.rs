//! Fixed-point residuals of Φ_2² and the volume ratio ψ over a perturbation sweep.

use std::f64::consts::PI;

use minkowski_iter::{fixed_point_residual, make_kernel, psi_ratio, Body, Domain, Profile, Result};

fn main() -> Result<()> {
    let d = Domain::sphere(24, 32, 64)?;
    let kernel = make_kernel(3, Profile::legendre(3, vec![1.0, 0.0, 0.2, 0.0, 0.03]), 24)?;
    println!("ψ(B) = 3/(4π) = {:.12}", 3.0 / (4.0 * PI));
    println!("   ε      residual    α           ψ");
    for eps in [0.0, 0.01, 0.02, 0.03, 0.05] {
        let body = Body::perturbed_ball(&d, &[(2, 0, eps)])?;
        let (res, alpha) = fixed_point_residual(&body, &kernel, 2)?;
        println!("{eps:.2} {res:>12.3e} {alpha:>8.5} {:>14.12}", psi_ratio(&body, &kernel, 2)?);
    }
    Ok(())
}
