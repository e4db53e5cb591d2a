//! Legendre polynomials `P_k^n`, Gauss–Gegenbauer rules and Funk–Hecke multipliers.

use minkowski_iter::harmonics::legendre::{dimension_count, legendre, sphere_area};
use minkowski_iter::harmonics::{zonal_multipliers, QuadratureRule};
use minkowski_iter::Result;

fn main() -> Result<()> {
    for n in [3, 5, 8] {
        let vals: Vec<String> = (0..5).map(|k| format!("{:+.6}", legendre(n, k, 0.3).unwrap())).collect();
        println!("n = {n}: P_0..P_4 at t = 0.3: {}", vals.join(" "));
        println!("        N(n, 0..4) = {:?}", (0..5).map(|k| dimension_count(n, k)).collect::<Vec<_>>());
    }

    // The weight (1-t²)^{(n-3)/2} integrates to ω_n / ω_{n-1}.
    let rule = QuadratureRule::gegenbauer(6, 20)?;
    println!("mass of the n=6 rule: {:.15}  (ω_6/ω_5 = {:.15})", rule.total_mass(), sphere_area(6) / sphere_area(5));

    let rule = QuadratureRule::gegenbauer(3, 40)?;
    let a = zonal_multipliers(3, |t| 1.0 + 0.5 * t * t, 6, &rule);
    println!("multipliers of 1 + t²/2 on S^2: {:?}", a.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>());
    Ok(())
}
