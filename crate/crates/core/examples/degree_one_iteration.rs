//! Normalized iteration of a degree-one valuation from a random body.

use minkowski_iter::sampling::{random_convex_body, rng};
use minkowski_iter::valuation::lambda_degree1;
use minkowski_iter::{iterate, make_kernel, Domain, IterateOptions, Mode, Profile, Result};

fn main() -> Result<()> {
    let d = Domain::sphere(32, 48, 96)?;
    let kernel = make_kernel(3, Profile::spline_bump(0.5, 0.3)?, 32)?;
    let lam = lambda_degree1(&kernel);
    let body = random_convex_body(&d, &mut rng(11), 6, 0.3)?;
    let trace = iterate(&body, &kernel, 1, IterateOptions::new(12, Mode::Degree1))?;
    let d0 = trace.records[0].d_2;
    println!("λ_g = {lam:.4}");
    println!("step        d_2     λ_g^m d_0          γ_m");
    for r in &trace.records {
        println!("{:>4} {:>10.3e} {:>13.3e} {:>12.6e}", r.step, r.d_2, lam.powi(r.step as i32) * d0, r.log_gamma.exp());
    }
    Ok(())
}
