//! Support functions: validation, restricted Hessians, distances and intrinsic volumes.

use minkowski_iter::sampling::{random_convex_body, rng};
use minkowski_iter::{hausdorff_distance, lp_distance, Body, Domain, Error, Profile, Result};

fn main() -> Result<()> {
    let d = Domain::sphere(24, 32, 64)?;
    let ball = Body::ball(&d, 1.0)?;
    let k = Body::perturbed_ball(&d, &[(2, 0, 0.05), (3, 1, 0.02)])?;
    println!("d_H(K, B) = {:.6}, d_2(K, B) = {:.6}", hausdorff_distance(&k, &ball)?, lp_distance(&k, &ball, 2.0)?);
    println!("Hessian eigenvalues of K lie in [{:.4}, {:.4}]", k.min_eigenvalue(), k.max_eigenvalue());
    for i in 1..=2 {
        println!("V_{i}(K) = {:.10} from s_i, {:.10} from h s_(i-1)", k.intrinsic_volume(i)?, k.intrinsic_volume_via_support(i)?);
    }
    println!("V_3(K) = {:.10}", k.intrinsic_volume(3)?);

    match Body::perturbed_ball(&d, &[(4, 0, 0.2)]) {
        Err(Error::NotConvex { eigenvalue, location }) => println!("rejected: eigenvalue {eigenvalue:.4} at {location}"),
        other => println!("unexpected: {other:?}"),
    }

    let r = random_convex_body(&d, &mut rng(5), 6, 0.3)?;
    println!("random body: mean width {:.6}", r.mean_width());

    let z = Domain::zonal(6, 24)?;
    let e = Body::zonal(&z, &Profile::ellipsoid(1.3, 1.0)?)?;
    println!("ellipsoid of revolution in R^6: V_1 = {:.6}, V_6 = {:.6}", e.intrinsic_volume(1)?, e.intrinsic_volume(6)?);
    Ok(())
}
