//! Mixed discriminants and the area-measure densities `s_i(K, ·)`.

use minkowski_iter::sampling::{random_convex_body, rng};
use minkowski_iter::{area_density, box_n, mixed_discriminant, Domain, Result};
use nalgebra::DMatrix;

fn main() -> Result<()> {
    let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 3.0]);
    let id = DMatrix::<f64>::identity(3, 3);
    println!("D(A, A, A) = {:.6} = det A = {:.6}", mixed_discriminant(&[a.clone(), a.clone(), a.clone()])?, a.determinant());
    println!("D(A, I, I) = {:.6} = tr A / 3 = {:.6}", mixed_discriminant(&[a.clone(), id.clone(), id])?, a.trace() / 3.0);

    let d = Domain::sphere(24, 32, 64)?;
    let k = random_convex_body(&d, &mut rng(2), 8, 0.3)?;
    for i in 0..=2 {
        let s = area_density(&k, i)?;
        let c = s.centroid();
        println!("s_{i}: mean {:.6}, sup |s - 1| {:.4}, centroid ({:+.1e}, {:+.1e}, {:+.1e})", s.mean(), s.sup_deviation(1.0), c[0], c[1], c[2]);
    }
    let s1 = area_density(&k, 1)?;
    let bh = d.synthesize(&box_n(k.expansion()))?;
    let err = s1.values().iter().zip(&bh).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    println!("max |s_1 - □h| = {err:.2e}");
    Ok(())
}
