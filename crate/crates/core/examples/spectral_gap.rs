//! Kernel multipliers: spectral gap, contraction constants, decay and the derivative identity.

use minkowski_iter::valuation::{
    decay_profile, derivative_multiplier_check, lambda_degree1, lambda_degree_i, spectral_gap_check,
};
use minkowski_iter::{make_kernel, projection_kernel, Profile, Result};

fn main() -> Result<()> {
    for n in 3..=8 {
        let r = spectral_gap_check(&projection_kernel(n, 40)?, 40);
        println!(
            "projection kernel n = {n}: ratio at k=2 {:.12}, next {:.4}, pass {}",
            r.entries[0].ratio,
            r.entries[2].ratio,
            r.pass()
        );
    }

    let k = make_kernel(3, Profile::legendre(3, vec![1.0, 0.0, 0.2, 0.0, 0.03]), 32)?;
    let l = lambda_degree_i(&k, 2);
    println!("1 + 0.2P_2 + 0.03P_4: λ_g = {:.4}, Λ_L = {:.4}, 2Λ_L = {:.4}", lambda_degree1(&k), l.lambda, l.i_lambda);

    let edited = projection_kernel(3, 12)?.with_multiplier(4, 0.2)?;
    println!("projection kernel with a_4 = 0.2: first violation at k = {:?}", spectral_gap_check(&edited, 12).violation);

    let spline = make_kernel(3, Profile::spline_bump(0.5, 0.3)?, 48)?;
    let dec = decay_profile(&spline);
    println!("C^2 spline: log-log slope {:.3}, bound {:.1}", dec.slope.unwrap(), dec.bound.unwrap());

    let p = Profile::legendre(3, vec![1.0, 0.4, 0.3, -0.2, 0.1]);
    for (n, j) in [(6, 1), (8, 2)] {
        let rep = derivative_multiplier_check(&p, n, j, 20)?;
        println!("a_k^{n}[g^({j})] vs (2π)^{j} a_(k+{j})^{}[g]: max relative error {:.1e}", n - 2 * j, rep.max_relative_error);
    }
    Ok(())
}
