//! Local convergence of the normalized degree-2 iteration near the ball.

use minkowski_iter::valuation::lambda_degree_i;
use minkowski_iter::{iterate, make_kernel, Body, Domain, IterateOptions, Mode, Profile, Result};

fn main() -> Result<()> {
    let d = Domain::sphere(32, 48, 96)?;
    let kernel = make_kernel(3, Profile::legendre(3, vec![1.0, 0.0, 0.2, 0.0, 0.03]), 32)?;
    let body = Body::perturbed_ball(&d, &[(2, 0, 0.05), (4, 0, 0.025)])?;
    let trace = iterate(&body, &kernel, 2, IterateOptions::new(30, Mode::General))?;
    print!("{}", trace.to_csv());
    println!(
        "stop: {:?}; fitted contraction {:.4}, 2Λ_L = {:.4}",
        trace.stop,
        trace.fitted_contraction.unwrap_or(f64::NAN),
        lambda_degree_i(&kernel, 2).i_lambda
    );
    Ok(())
}
