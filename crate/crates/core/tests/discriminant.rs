use minkowski_iter::discriminant::mixed_discriminant_sym2;
use minkowski_iter::sampling::{random_convex_body, rng};
use minkowski_iter::{area_density, box_n, mixed_discriminant, Body, Domain, Error, Profile, RestrictedHessian};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn random_symmetric(r: &mut impl Rng, k: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(k, k, |_, _| r.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

fn random_psd(r: &mut impl Rng, k: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(k, k, |_, _| r.random_range(-1.0..1.0));
    &a * a.transpose()
}

fn polarization(ms: &[DMatrix<f64>]) -> f64 {
    let k = ms.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << k) {
        let mut sum = DMatrix::zeros(k, k);
        for (j, m) in ms.iter().enumerate() {
            if mask & (1 << j) != 0 {
                sum += m;
            }
        }
        let sign = if (k - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * sum.determinant();
    }
    total / (1..=k).product::<usize>() as f64
}

fn cofactor(b: &DMatrix<f64>) -> DMatrix<f64> {
    let k = b.nrows();
    DMatrix::from_fn(k, k, |i, j| {
        let minor = b.clone().remove_row(i).remove_column(j);
        let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        s * if k == 1 { 1.0 } else { minor.determinant() }
    })
}

#[test]
fn discriminant_examples() {
    let id = DMatrix::<f64>::identity(2, 2);
    assert!((mixed_discriminant(&[id.clone(), id]).unwrap() - 1.0).abs() < 1e-15);
    let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
    let b = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 4.0]));
    assert!((mixed_discriminant(&[a, b]).unwrap() - 5.0).abs() < 1e-14);
    let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    assert!((mixed_discriminant(&[a.clone(), a.clone()]).unwrap() - a.determinant()).abs() < 1e-14);
    assert!(matches!(mixed_discriminant(&[]), Err(Error::SizeMismatch(_))));
    let id3 = DMatrix::<f64>::identity(3, 3);
    assert!(matches!(mixed_discriminant(&[id3.clone(), id3]), Err(Error::SizeMismatch(_))));
}

#[test]
fn sym2_agrees_with_general() {
    let mut r = rng(3);
    for _ in 0..50 {
        let (a, b) = (random_symmetric(&mut r, 2), random_symmetric(&mut r, 2));
        let g = mixed_discriminant(&[a.clone(), b.clone()]).unwrap();
        let s = mixed_discriminant_sym2([a[(0, 0)], a[(0, 1)], a[(1, 1)]], [b[(0, 0)], b[(0, 1)], b[(1, 1)]]);
        assert!((g - s).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn polarization_oracle(seed in 0u64..10_000, k in 1usize..6) {
        let mut r = rng(seed);
        let ms: Vec<_> = (0..k).map(|_| random_symmetric(&mut r, k)).collect();
        let d = mixed_discriminant(&ms).unwrap();
        let p = polarization(&ms);
        prop_assert!((d - p).abs() < 1e-10 * (1.0 + p.abs()), "{} vs {}", d, p);
    }

    #[test]
    fn cofactor_oracle(seed in 0u64..10_000, k in 1usize..6) {
        let mut r = rng(seed);
        let (a, b) = (random_symmetric(&mut r, k), random_symmetric(&mut r, k));
        let mut ms = vec![a.clone()];
        ms.extend(std::iter::repeat_n(b.clone(), k - 1));
        let d = mixed_discriminant(&ms).unwrap();
        let c = (cofactor(&b).transpose() * &a).trace() / k as f64;
        prop_assert!((d - c).abs() < 1e-10 * (1.0 + c.abs()));
    }

    #[test]
    fn multilinear_and_symmetric(seed in 0u64..10_000, k in 2usize..5, s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let ms: Vec<_> = (0..k).map(|_| random_symmetric(&mut r, k)).collect();
        let extra = random_symmetric(&mut r, k);
        let base = mixed_discriminant(&ms).unwrap();
        let mut lin = ms.clone();
        lin[0] = &ms[0] * s + &extra;
        let mut only = ms.clone();
        only[0] = extra;
        let lhs = mixed_discriminant(&lin).unwrap();
        let rhs = s * base + mixed_discriminant(&only).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        let mut swapped = ms.clone();
        swapped.swap(0, k - 1);
        prop_assert!((mixed_discriminant(&swapped).unwrap() - base).abs() < 1e-12 * (1.0 + base.abs()));
    }

    #[test]
    fn nonnegative_on_psd(seed in 0u64..10_000, k in 1usize..6) {
        let mut r = rng(seed);
        let ms: Vec<_> = (0..k).map(|_| random_psd(&mut r, k)).collect();
        prop_assert!(mixed_discriminant(&ms).unwrap() >= -1e-12);
    }

    #[test]
    fn diagonal_reduces_to_det(seed in 0u64..10_000, k in 1usize..7, c in 0.1f64..3.0) {
        let mut r = rng(seed);
        let a = random_symmetric(&mut r, k);
        let d = mixed_discriminant(&vec![a.clone(); k]).unwrap();
        prop_assert!((d - a.determinant()).abs() < 1e-10 * (1.0 + d.abs()));
        let scaled = mixed_discriminant(&vec![&a * c; k]).unwrap();
        prop_assert!((scaled - c.powi(k as i32) * d).abs() < 1e-9 * (1.0 + scaled.abs()));
    }
}

fn grid() -> Domain {
    Domain::sphere(24, 32, 64).unwrap()
}

#[test]
fn density_examples() {
    let d = grid();
    let r = 1.7;
    let b = Body::ball(&d, r).unwrap();
    for (i, e) in [(0, 1.0), (1, r), (2, r * r)] {
        let s = area_density(&b, i).unwrap();
        assert!(s.values().iter().all(|v| (v - e).abs() < 1e-12 * e), "s_{i}");
    }
    assert!(matches!(area_density(&b, 3), Err(Error::Domain(_))));

    let z = Domain::zonal(5, 16).unwrap();
    let bz = Body::ball(&z, 2.0).unwrap();
    for i in 0..=4 {
        let s = area_density(&bz, i).unwrap();
        let e = 2f64.powi(i as i32);
        assert!(s.values().iter().all(|v| (v - e).abs() < 1e-12 * e));
    }

    // s_2 is the determinant of the frame Hessian.
    let k = Body::perturbed_ball(&d, &[(2, 0, 0.05)]).unwrap();
    let s2 = area_density(&k, 2).unwrap();
    for node in (0..d.len()).step_by(31) {
        let RestrictedHessian::Frame { matrix: m, .. } = k.restricted_hessian(node) else { panic!() };
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((s2.values()[node] - det).abs() < 1e-13);
    }
}

#[test]
fn density_matches_closed_form_zonal() {
    // Body of revolution on the grid vs the eigenvalue formula along the profile.
    let profile = Profile::legendre(3, vec![1.0, 0.05, 0.12, 0.0, 0.02]);
    let g = grid();
    let Domain::Sphere(s) = &g else { unreachable!() };
    let bg = Body::zonal_on_grid(&g, &profile).unwrap();
    let (s1, s2) = (area_density(&bg, 1).unwrap(), area_density(&bg, 2).unwrap());
    for node in 0..g.len() {
        let (nu, mu) = profile.hessian_eigenvalues(s.node(node)[2]);
        assert!((s1.values()[node] - 0.5 * (nu + mu)).abs() < 1e-8);
        assert!((s2.values()[node] - nu * mu).abs() < 1e-8);
    }
    let z = Domain::zonal(3, 48).unwrap();
    let bz = Body::zonal(&z, &profile).unwrap();
    for i in 1..=2 {
        let (a, b) = (area_density(&bz, i).unwrap().mass(), area_density(&bg, i).unwrap().mass());
        assert!((a - b).abs() < 1e-8, "s_{i}: {a} vs {b}");
    }
}

#[test]
fn s1_is_box_of_h() {
    let d = grid();
    for seed in 0..4 {
        let k = random_convex_body(&d, &mut rng(seed), 8, 0.3).unwrap();
        let s1 = area_density(&k, 1).unwrap();
        let bh = d.synthesize(&box_n(k.expansion())).unwrap();
        for (a, b) in s1.values().iter().zip(&bh) {
            assert!((a - b).abs() < 1e-8);
        }
    }
    let z = Domain::zonal(6, 24).unwrap();
    let k = Body::zonal(&z, &Profile::legendre(6, vec![1.0, 0.1, 0.15, 0.0, 0.03])).unwrap();
    let s1 = area_density(&k, 1).unwrap();
    let bh = z.synthesize(&box_n(k.expansion())).unwrap();
    for (a, b) in s1.values().iter().zip(&bh) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn box_examples() {
    let d = grid();
    let c = d.constant(2.0);
    assert_eq!(box_n(&c).coefficients(), c.coefficients());
    let mut lin = d.zero_expansion();
    lin.set_grid_coefficient(1, 0, 1.0);
    assert!(box_n(&lin).norm() < 1e-15);
    let mut q = d.zero_expansion();
    q.set_grid_coefficient(2, 1, 1.0);
    assert!((box_n(&q).grid_coefficient(2, 1) + 2.0).abs() < 1e-15);
}

#[test]
fn trace_identity_and_centroid() {
    // Σ over eigenvalues of D²h: tr = 2 s_1 at n=3; and area measures have zero centroid.
    let d = grid();
    for seed in 0..3 {
        let k = random_convex_body(&d, &mut rng(seed + 40), 8, 0.3).unwrap();
        let s1 = area_density(&k, 1).unwrap();
        for node in (0..d.len()).step_by(41) {
            let ev = k.restricted_hessian(node).eigenvalues();
            let (a, b) = (ev[0], ev[1]);
            assert!((a + b - 2.0 * s1.values()[node]).abs() < 1e-12);
        }
        for i in 1..=2 {
            let s = area_density(&k, i).unwrap();
            assert!(s.centroid().iter().all(|c| c.abs() < 1e-10), "s_{i}");
            assert!(s.values().iter().all(|v| *v > 0.0));
        }
    }
    let z = Domain::zonal(5, 24).unwrap();
    let k = Body::zonal(&z, &Profile::legendre(5, vec![1.0, 0.2, 0.1, 0.0, 0.02])).unwrap();
    for i in 1..=4 {
        let s = area_density(&k, i).unwrap();
        assert!(s.centroid().iter().all(|c| c.abs() < 1e-10), "zonal s_{i}");
    }
}
