use std::f64::consts::PI;

use minkowski_iter::harmonics::legendre::box_multiplier;
use minkowski_iter::sampling::{random_band_limited, random_convex_body, random_rotation, rng};
use minkowski_iter::valuation::{
    ball_kernel, decay_profile, derivative_multiplier_check, discriminant_bound_probe, is_monotone_degree1,
    lambda_degree1, lambda_degree_i, spectral_gap_check, Kernel,
};
use minkowski_iter::{
    apply_valuation, box_n, convolve, hausdorff_distance, make_kernel, projection_kernel, Body, Domain, Error, Profile,
    Smoothness,
};
use proptest::prelude::*;

fn grid() -> Domain {
    Domain::sphere(24, 32, 64).unwrap()
}

fn showcase(n: usize, kmax: usize) -> Kernel {
    make_kernel(n, Profile::legendre(n, vec![1.0, 0.0, 0.2, 0.0, 0.03]), kmax).unwrap()
}

#[test]
fn projection_kernel_examples() {
    let k = projection_kernel(3, 16).unwrap();
    // ω_2 ∫ |t|/2 dt = 2π · 1/2.
    assert!((k.normalization() - PI).abs() < 1e-13);
    assert!((k.multipliers()[2] - 0.25).abs() < 1e-13);
    assert!(k.is_even());
    for j in (1..=16).step_by(2) {
        assert!(k.multipliers()[j].abs() < 1e-14);
    }
    // Beta-function oracle: a_2/a_0 = 1/(n+1) for |t| in every dimension.
    for n in 3..=8 {
        let k = projection_kernel(n, 6).unwrap();
        assert!((k.multipliers()[2] - 1.0 / (n as f64 + 1.0)).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn showcase_multipliers_are_legendre_coefficients() {
    // For g = Σ c_k P_k on S^2, a_k / a_0 = c_k / (2k + 1).
    let k = showcase(3, 12);
    let a = k.multipliers();
    assert!((a[2] - 0.2 / 5.0).abs() < 1e-14);
    assert!((a[4] - 0.03 / 9.0).abs() < 1e-14);
    assert!(a[5..].iter().all(|v| v.abs() < 1e-14));
    assert_eq!(k.smoothness(), Smoothness::BandLimited(4));
}

#[test]
fn kernel_rejections() {
    assert!(matches!(
        make_kernel(3, Profile::legendre(3, vec![1.0, 0.0, 0.9]), 8),
        Err(Error::NotConvex { .. })
    ));
    assert!(matches!(
        Kernel::from_multipliers(3, vec![0.0, 0.2], Smoothness::Analytic, "zero"),
        Err(Error::ZeroMass(_))
    ));
    assert!(matches!(make_kernel(2, Profile::ball(1.0), 8), Err(Error::Domain(_))));
}

#[test]
fn kernel_json_round_trip() {
    let k = showcase(4, 10);
    let text = serde_json::to_string(&k.to_json()).unwrap();
    let back = Kernel::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    for (a, b) in back.multipliers().iter().zip(k.multipliers()) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(back.dim(), 4);
}

#[test]
fn convolve_examples() {
    let d = grid();
    let k = showcase(3, 24);
    let c = convolve(&d.constant(2.0), &k).unwrap();
    assert!((c.block(0)[0] - d.constant(2.0).block(0)[0]).abs() < 1e-15);
    let mut y = d.zero_expansion();
    y.set_grid_coefficient(2, -1, 1.0);
    assert!((convolve(&y, &k).unwrap().grid_coefficient(2, -1) - 0.04).abs() < 1e-15);
    let z = Domain::zonal(5, 10).unwrap();
    assert!(matches!(convolve(&z.constant(1.0), &k), Err(Error::RepresentationMismatch(_))));
    let small = showcase(3, 8);
    assert!(matches!(convolve(&d.constant(1.0), &small), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convolution_is_self_adjoint(a in 0u64..1000, b in 0u64..1000) {
        let d = grid();
        let k = projection_kernel(3, 24).unwrap();
        let f = random_band_limited(&d, &mut rng(a), 10);
        let g = random_band_limited(&d, &mut rng(b + 5000), 10);
        let (fk, gk) = (d.synthesize(&convolve(&f, &k).unwrap()).unwrap(), d.synthesize(&convolve(&g, &k).unwrap()).unwrap());
        let (fv, gv) = (d.synthesize(&f).unwrap(), d.synthesize(&g).unwrap());
        let lhs = d.integrate(&fk.iter().zip(&gv).map(|(x, y)| x * y).collect::<Vec<_>>());
        let rhs = d.integrate(&fv.iter().zip(&gk).map(|(x, y)| x * y).collect::<Vec<_>>());
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn convolution_commutes_with_box(a in 0u64..1000) {
        let d = grid();
        let k = showcase(3, 24);
        let f = random_band_limited(&d, &mut rng(a), 12);
        let x = box_n(&convolve(&f, &k).unwrap());
        let y = convolve(&box_n(&f), &k).unwrap();
        prop_assert!(x.sub(&y).unwrap().norm() < 1e-13 * (1.0 + x.norm()));
    }
}

#[test]
fn valuation_of_balls() {
    let d = grid();
    let k = showcase(3, 24);
    for i in 1..=2 {
        for r in [0.5, 1.0, 2.0] {
            let img = apply_valuation(&Body::ball(&d, r).unwrap(), &k, i).unwrap();
            let e = r.powi(i as i32);
            assert!(img.values().iter().all(|v| (v - e).abs() < 1e-12 * e), "i {i} r {r}");
        }
    }
    let z = Domain::zonal(6, 16).unwrap();
    let k6 = showcase(6, 16);
    for i in 1..=5 {
        let img = apply_valuation(&Body::ball(&z, 1.5).unwrap(), &k6, i).unwrap();
        let e = 1.5f64.powi(i as i32);
        assert!(img.values().iter().all(|v| (v - e).abs() < 1e-11 * e), "n=6 i {i}");
    }
    assert!(matches!(apply_valuation(&Body::ball(&d, 1.0).unwrap(), &k, 0), Err(Error::Domain(_))));
    assert!(matches!(apply_valuation(&Body::ball(&d, 1.0).unwrap(), &k, 3), Err(Error::Domain(_))));
}

#[test]
fn ball_kernel_collapses_to_balls() {
    let d = grid();
    let k = ball_kernel(3, 24).unwrap();
    let body = random_convex_body(&d, &mut rng(9), 8, 0.3).unwrap();
    for i in 1..=2 {
        let img = apply_valuation(&body, &k, i).unwrap();
        let mean = body.area_density(i).unwrap().mean();
        assert!(img.values().iter().all(|v| (v - mean).abs() < 1e-12));
    }
}

#[test]
fn linearization_around_the_ball() {
    // s_1 is linear in h, so Φ_1(B + εY_l) = B + ε □(l) a_l Y_l exactly;
    // Φ_2 picks up twice that at first order.
    let d = grid();
    let k = showcase(3, 24);
    let eps = 1e-3;
    for l in [2usize, 3, 4] {
        let body = Body::perturbed_ball(&d, &[(l, 0, eps)]).unwrap();
        let lin = box_multiplier(3, l) * k.multipliers()[l];
        let one = apply_valuation(&body, &k, 1).unwrap();
        assert!((one.expansion().grid_coefficient(l, 0) - eps * lin).abs() < 1e-14);
        let two = apply_valuation(&body, &k, 2).unwrap();
        let c = two.expansion().grid_coefficient(l, 0);
        assert!((c - 2.0 * eps * lin).abs() < 10.0 * eps * eps, "l {l}: {c}");
    }
}

#[test]
fn homogeneity_and_invariance() {
    let d = grid();
    let k = showcase(3, 24);
    let body = random_convex_body(&d, &mut rng(21), 6, 0.25).unwrap();
    for i in 1..=2 {
        let base = apply_valuation(&body, &k, i).unwrap();

        let lam = 1.7;
        let scaled = Body::from_grid_values(&d, &body.values().iter().map(|v| lam * v).collect::<Vec<_>>()).unwrap();
        let img = apply_valuation(&scaled, &k, i).unwrap();
        for (a, b) in img.values().iter().zip(base.values()) {
            assert!((a - lam.powi(i as i32) * b).abs() < 1e-11);
        }

        let moved = body.translated(&[0.1, -0.05, 0.2]).unwrap();
        let img = apply_valuation(&moved, &k, i).unwrap();
        assert!(hausdorff_distance(&img, &base).unwrap() < 1e-9, "translation i {i}");

        let rho = random_rotation(&mut rng(5));
        let lhs = apply_valuation(&body.rotated(&rho).unwrap(), &k, i).unwrap();
        let rhs = base.rotated(&rho).unwrap();
        assert!(hausdorff_distance(&lhs, &rhs).unwrap() < 1e-8, "rotation i {i}");
    }
}

#[test]
fn degree_one_is_minkowski_additive() {
    let d = grid();
    let k = projection_kernel(3, 24).unwrap();
    let a = random_convex_body(&d, &mut rng(1), 6, 0.3).unwrap();
    let b = random_convex_body(&d, &mut rng(2), 6, 0.3).unwrap();
    let lhs = apply_valuation(&a.minkowski_sum(&b).unwrap(), &k, 1).unwrap();
    let rhs = apply_valuation(&a, &k, 1)
        .unwrap()
        .minkowski_sum(&apply_valuation(&b, &k, 1).unwrap())
        .unwrap();
    assert!(hausdorff_distance(&lhs, &rhs).unwrap() < 1e-12);
}

#[test]
fn spectral_gap_examples() {
    for n in 3..=8 {
        let r = spectral_gap_check(&projection_kernel(n, 40).unwrap(), 40);
        assert!(r.pass(), "n = {n}: {:?}", r.violation);
        assert!((r.entries[0].ratio - 1.0).abs() < 1e-10);
        assert!(r.entries[1..].iter().all(|e| e.ratio < 1.0));
    }
    let edited = projection_kernel(3, 12).unwrap().with_multiplier(4, 0.2).unwrap();
    let r = spectral_gap_check(&edited, 12);
    assert_eq!(r.violation, Some(4));
    assert!((r.entries[2].ratio - 3.0 * 6.0 * 0.2).abs() < 1e-12);
    let s = spectral_gap_check(&showcase(3, 20), 20);
    assert!(s.pass() && (s.max_ratio - 0.16).abs() < 1e-12);
}

#[test]
fn lambda_examples() {
    let k = showcase(3, 20);
    let l = lambda_degree_i(&k, 2);
    assert!((l.lambda - 0.08).abs() < 1e-13);
    assert!((l.i_lambda - 0.16).abs() < 1e-13 && l.contracting);
    assert!((lambda_degree1(&k) - 0.08).abs() < 1e-13);
    let p = lambda_degree_i(&projection_kernel(3, 30).unwrap(), 1);
    assert!((p.lambda - 0.5).abs() < 1e-10);
    assert!(!lambda_degree_i(&projection_kernel(3, 30).unwrap(), 2).contracting);
    assert_eq!(is_monotone_degree1(&k), Some(true));
    assert_eq!(is_monotone_degree1(&projection_kernel(3, 10).unwrap()), Some(true));
    let raw = Kernel::from_multipliers(3, vec![1.0, 0.0, 0.1], Smoothness::BandLimited(2), "raw").unwrap();
    assert_eq!(is_monotone_degree1(&raw), None);
}

#[test]
fn decay_examples() {
    let spline = make_kernel(3, Profile::spline_bump(0.5, 0.3).unwrap(), 48).unwrap();
    let r = decay_profile(&spline);
    assert_eq!(r.smoothness, Smoothness::Finite(2));
    assert!((r.bound.unwrap() - (-2.0)).abs() < 1e-15);
    assert!(r.pass && r.slope.unwrap() < -2.0, "{r:?}");
    let b = decay_profile(&showcase(3, 30));
    assert!(b.pass && b.max_beyond_band.unwrap() < 1e-14);
    let proj = decay_profile(&projection_kernel(3, 48).unwrap());
    assert!(proj.pass, "{proj:?}");
}

#[test]
fn derivative_identity_examples() {
    let p = Profile::legendre(8, vec![1.0, 0.4, 0.3, -0.2, 0.1, 0.05, -0.02]);
    for (n, j) in [(6, 1), (8, 1), (8, 2)] {
        let r = derivative_multiplier_check(&p, n, j, 20).unwrap();
        assert!(r.max_relative_error < 1e-8, "n {n} j {j}: {}", r.max_relative_error);
    }
    let s = Profile::spline_bump(0.5, 0.3).unwrap();
    let r = derivative_multiplier_check(&s, 6, 1, 20).unwrap();
    assert!(r.max_relative_error < 1e-8, "{}", r.max_relative_error);
    assert!(matches!(derivative_multiplier_check(&p, 5, 2, 4), Err(Error::Hypothesis(_))));
}

#[test]
fn discriminant_bounds_on_random_tuples() {
    let d = grid();
    for k in [showcase(3, 24), projection_kernel(3, 24).unwrap()] {
        for seed in 0..10 {
            let f1 = random_band_limited(&d, &mut rng(seed), 8);
            let f2 = random_band_limited(&d, &mut rng(seed + 100), 8);
            let p = discriminant_bound_probe(&d, &k, &f1, &f2).unwrap();
            assert!(p.lhs_l2 <= p.bound_l2_stated(), "{} seed {seed}", k.name());
            assert!(p.lhs_l2 <= p.bound_l2_pointwise());
            assert!(p.lhs_sup <= p.bound_sup() * (1.0 + 1e-12));
        }
    }
}

#[test]
fn stated_l2_bound_is_off_by_two_on_constants() {
    // With f_1 = f_2 = 1 the left side is ‖1‖_2 while the stated bound is half of it.
    let d = grid();
    let k = showcase(3, 24);
    let one = d.constant(1.0);
    let p = discriminant_bound_probe(&d, &k, &one, &one).unwrap();
    assert!((p.lhs_l2 - (4.0 * PI).sqrt()).abs() < 1e-12);
    assert!((p.lhs_l2 / p.bound_l2_stated() - 2.0).abs() < 1e-12);
    assert!((p.lhs_l2 - p.bound_l2_pointwise()).abs() < 1e-12);
}
