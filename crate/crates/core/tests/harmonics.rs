use std::f64::consts::PI;

use minkowski_iter::harmonics::legendre::{dimension_count, gamma, legendre, sphere_area};
use minkowski_iter::harmonics::smoothing::spectral_tails;
use minkowski_iter::harmonics::sphere::evaluate_expansion_at;
use minkowski_iter::harmonics::{
    laplacian, smooth_mj, ualpha_norm_estimate, zonal_multiplier, zonal_multipliers, Domain, QuadratureRule,
};
use minkowski_iter::sampling::{random_band_limited, random_expansion, rng};
use minkowski_iter::Error;
use proptest::prelude::*;

fn sphere(k: usize) -> Domain {
    Domain::sphere(k, k + 4, 2 * k + 8).unwrap()
}

// Gegenbauer explicit sum, normalized so that P(1) = 1.
fn gegenbauer_oracle(n: usize, k: usize, t: f64) -> f64 {
    let lam = (n as f64 - 2.0) / 2.0;
    let c = |x: f64| -> f64 {
        (0..=k / 2)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * gamma(k as f64 - m as f64 + lam)
                    / (gamma(lam) * gamma(m as f64 + 1.0) * gamma((k - 2 * m) as f64 + 1.0))
                    * (2.0 * x).powi((k - 2 * m) as i32)
            })
            .sum()
    };
    c(t) / c(1.0)
}

// Coefficients (ascending) of (1 - t^2)^p.
fn one_minus_t2_pow(p: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..p {
        let mut next = vec![0.0; c.len() + 2];
        for (i, v) in c.iter().enumerate() {
            next[i] += v;
            next[i + 2] -= v;
        }
        c = next;
    }
    c
}

fn differentiate(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect()
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

// Rodrigues for odd n, where (1-t^2)^{k+(n-3)/2} is a polynomial.
fn rodrigues_oracle(n: usize, k: usize, t: f64) -> f64 {
    let p = k + (n - 3) / 2;
    let mut c = one_minus_t2_pow(p);
    for _ in 0..k {
        c = differentiate(&c);
    }
    let half = (n as f64 - 1.0) / 2.0;
    let r = gamma(half) / (2f64.powi(k as i32) * gamma(k as f64 + half));
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * r * horner(&c, t) / (1.0 - t * t).powi((n as i32 - 3) / 2)
}

#[test]
fn legendre_examples() {
    assert!((legendre(5, 7, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((legendre(3, 1, 0.3).unwrap() - 0.3).abs() < 1e-15);
    assert!((legendre(3, 2, 0.0).unwrap() + 0.5).abs() < 1e-15);
    assert!(matches!(legendre(3, 2, 1.1), Err(Error::Domain(_))));
    assert!(legendre(3, 2, 1.0 + 1e-13).is_ok());
}

#[test]
fn legendre_matches_rodrigues_for_odd_dimensions() {
    for n in [3, 5, 7] {
        for k in 0..=8 {
            for i in 0..21 {
                let t = -0.95 + 0.095 * i as f64;
                let (a, b) = (legendre(n, k, t).unwrap(), rodrigues_oracle(n, k, t));
                assert!((a - b).abs() < 1e-11, "n={n} k={k} t={t}: {a} vs {b}");
            }
        }
    }
}

proptest! {
    #[test]
    fn legendre_matches_gegenbauer_sum(n in 3usize..=9, k in 0usize..=14, t in -1.0f64..=1.0) {
        let (a, b) = (legendre(n, k, t).unwrap(), gegenbauer_oracle(n, k, t));
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn legendre_bounded_by_one(n in 3usize..=9, k in 0usize..=40, t in -1.0f64..=1.0) {
        prop_assert!(legendre(n, k, t).unwrap().abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn dimension_count_examples_and_oracle() {
    assert_eq!(dimension_count(3, 0), 1);
    assert_eq!(dimension_count(3, 2), 5);
    assert_eq!(dimension_count(4, 3), 16);
    let c = |a: i64, b: i64| -> i64 {
        if a < 0 || b < 0 || b > a {
            return 0;
        }
        (0..b).fold(1i64, |acc, i| acc * (a - i) / (i + 1))
    };
    for n in 3..=10i64 {
        for k in 0..=30i64 {
            let oracle = c(n + k - 1, n - 1) - c(n + k - 3, n - 1);
            assert_eq!(dimension_count(n as usize, k as usize) as i64, oracle, "n={n} k={k}");
        }
    }
}

#[test]
fn gegenbauer_rule_integrates_monomials() {
    for n in 3..=8 {
        let w = (n as f64 - 3.0) / 2.0;
        let rule = QuadratureRule::gegenbauer(n, 20).unwrap();
        assert!(rule.weights().iter().all(|x| *x > 0.0));
        for m in 0..=19i32 {
            // ∫ t^{2m} (1-t^2)^w = B(m + 1/2, w + 1)
            let exact = gamma(m as f64 + 0.5) * gamma(w + 1.0) / gamma(m as f64 + w + 1.5);
            let q = rule.integrate(|t| t.powi(2 * m));
            assert!(((q - exact) / exact).abs() < 1e-12, "n={n} m={m}");
            let odd = rule.integrate(|t| t.powi(2 * m + 1));
            assert!(odd.abs() < 1e-13);
        }
    }
}

#[test]
fn sphere_rule_mass() {
    let rule = QuadratureRule::sphere(96, 192).unwrap();
    assert!((rule.total_mass() - 4.0 * PI).abs() < 1e-12);
    assert!(rule.weights().iter().all(|w| *w > 0.0));
}

#[test]
fn zonal_multiplier_examples() {
    let rule3 = QuadratureRule::gegenbauer(3, 30).unwrap();
    assert!((zonal_multiplier(3, |_| 1.0, 0, &rule3) - 4.0 * PI).abs() < 1e-12);
    for n in 3..=8 {
        let rule = QuadratureRule::gegenbauer(n, 30).unwrap();
        assert!(zonal_multiplier(n, |_| 1.0, 2, &rule).abs() < 1e-12);
    }
    let kink = QuadratureRule::gegenbauer_composite(3, &[0.0], 30).unwrap();
    assert!((zonal_multiplier(3, f64::abs, 0, &kink) - 2.0 * PI).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // g = Σ c_j P_j^n has a_k = c_k ω_n / N(n, k).
    #[test]
    fn multipliers_of_legendre_series(n in 3usize..=8, c in prop::collection::vec(-1.0f64..1.0, 1..10)) {
        let rule = QuadratureRule::gegenbauer(n, 24).unwrap();
        let g = |t: f64| c.iter().enumerate().map(|(j, cj)| cj * legendre(n, j, t).unwrap()).sum::<f64>();
        let a = zonal_multipliers(n, g, c.len() + 2, &rule);
        for (k, ak) in a.iter().enumerate() {
            let ck = c.get(k).copied().unwrap_or(0.0);
            let expect = ck * sphere_area(n) / dimension_count(n, k) as f64;
            prop_assert!((ak - expect).abs() < 1e-11, "k={} {} vs {}", k, ak, expect);
        }
    }
}

#[test]
fn projection_examples() {
    let d = sphere(12);
    let Domain::Sphere(s) = &d else { unreachable!() };
    let c = vec![2.5; d.len()];
    let p = d.project(&c, 0).unwrap();
    assert!(p.iter().all(|v| (v - 2.5).abs() < 1e-12));

    let mut y2 = d.zero_expansion();
    y2.set_grid_coefficient(2, 1, 1.0);
    let v = d.synthesize(&y2).unwrap();
    let p = d.project(&v, 2).unwrap();
    assert!(p.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12));
    assert!(d.project(&v, 3).unwrap().iter().all(|x| x.abs() < 1e-12));

    let sq: Vec<f64> = (0..d.len()).map(|i| s.node(i)[2].powi(2)).collect();
    let p = d.project(&sq, 0).unwrap();
    assert!(p.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
}

#[test]
fn projection_is_idempotent_and_self_adjoint() {
    let d = sphere(16);
    let mut r = rng(3);
    let f = d.synthesize(&random_band_limited(&d, &mut r, 16)).unwrap();
    let g = d.synthesize(&random_band_limited(&d, &mut r, 16)).unwrap();
    for k in [0, 1, 5, 16] {
        let pf = d.project(&f, k).unwrap();
        let ppf = d.project(&pf, k).unwrap();
        assert!(pf.iter().zip(&ppf).all(|(a, b)| (a - b).abs() < 1e-11));
        let pg = d.project(&g, k).unwrap();
        let lhs: Vec<f64> = pf.iter().zip(&g).map(|(a, b)| a * b).collect();
        let rhs: Vec<f64> = f.iter().zip(&pg).map(|(a, b)| a * b).collect();
        assert!((d.integrate(&lhs) - d.integrate(&rhs)).abs() < 1e-10);
    }
}

#[test]
fn synthesis_examples() {
    let d = sphere(10);
    assert!(d.synthesize(&d.zero_expansion()).unwrap().iter().all(|v| *v == 0.0));
    let v = d.synthesize(&d.constant(-1.75)).unwrap();
    assert!(v.iter().all(|x| (x + 1.75).abs() < 1e-13));
    let mut e = d.zero_expansion();
    e.set_grid_coefficient(0, 0, (4.0 * PI).sqrt());
    assert!(d.synthesize(&e).unwrap().iter().all(|x| (x - 1.0).abs() < 1e-13));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn round_trip_and_parseval(seed in 0u64..1000, deg in 0usize..=20) {
        let d = sphere(20);
        let e = random_band_limited(&d, &mut rng(seed), deg);
        let v = d.synthesize(&e).unwrap();
        let back = d.analyze(&v).unwrap();
        let diff = back.sub(&e).unwrap();
        prop_assert!(diff.coefficients().iter().all(|c| c.abs() < 1e-10));
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        let l2 = d.integrate(&sq);
        let coef = e.norm().powi(2);
        prop_assert!((l2 - coef).abs() <= 1e-10 * coef.max(1e-300));
    }

    #[test]
    fn components_are_orthogonal(seed in 0u64..1000) {
        let d = sphere(12);
        let e = random_band_limited(&d, &mut rng(seed), 12);
        let f2 = e.norm().powi(2);
        for k in 0..=12 {
            let pk = d.synthesize(&e.component(k)).unwrap();
            for l in (k + 1)..=12 {
                let pl = d.synthesize(&e.component(l)).unwrap();
                let prod: Vec<f64> = pk.iter().zip(&pl).map(|(a, b)| a * b).collect();
                prop_assert!(d.integrate(&prod).abs() <= 1e-10 * f2);
            }
        }
    }
}

#[test]
fn aliasing_is_flagged() {
    let d = sphere(8);
    let Domain::Sphere(s) = &d else { unreachable!() };
    let abs: Vec<f64> = (0..d.len()).map(|i| s.node(i)[2].abs()).collect();
    assert!(matches!(d.analyze_strict(&abs, 1e-9), Err(Error::Aliasing { .. })));
    let ok: Vec<f64> = (0..d.len()).map(|i| s.node(i)[2].powi(2)).collect();
    assert!(d.analyze_strict(&ok, 1e-9).is_ok());
}

// T_g f(v) = ∫ g(u·v) f(u) du by direct quadrature against the multiplier route.
#[test]
fn funk_hecke_brute_force() {
    let d = sphere(14);
    let Domain::Sphere(s) = &d else { unreachable!() };
    let coeffs = [0.7, -0.2, 0.4, 0.1, -0.3, 0.05];
    let g = |t: f64| coeffs.iter().enumerate().map(|(j, c)| c * t.powi(j as i32)).sum::<f64>();
    let rule = QuadratureRule::gegenbauer(3, 20).unwrap();
    let a = zonal_multipliers(3, g, 14, &rule);
    let e = random_band_limited(&d, &mut rng(17), 8);
    let f = d.synthesize(&e).unwrap();
    let spectral = d.synthesize(&e.scale_degrees(|k| a[k])).unwrap();
    let w = s.weights();
    for v in (0..d.len()).step_by(37) {
        let nv = s.node(v);
        let brute: f64 = (0..d.len())
            .map(|i| {
                let u = s.node(i);
                w[i] * g(u[0] * nv[0] + u[1] * nv[1] + u[2] * nv[2]) * f[i]
            })
            .sum();
        assert!((brute - spectral[v]).abs() < 1e-11 * (1.0 + brute.abs()), "node {v}");
    }
    // Block-wise form of the same identity.
    let back = d.analyze(&spectral).unwrap();
    for k in 0..=8 {
        let (b, o) = (back.block(k), e.block(k));
        for (x, y) in b.iter().zip(o) {
            assert!((x - a[k] * y).abs() <= 1e-9 * (a[k] * y).abs() + 1e-14);
        }
    }
}

// tr(D²f) - (n-1) f is the spherical Laplacian; compare with the multiplier route.
#[test]
fn laplacian_eigenvalue_law() {
    let d = sphere(12);
    let Domain::Sphere(s) = &d else { unreachable!() };
    for k in 0..=12 {
        let mut e = d.zero_expansion();
        for (i, c) in e.block_mut(k).iter_mut().enumerate() {
            *c = 1.0 + 0.1 * i as f64;
        }
        let f = d.synthesize(&e).unwrap();
        let hess = s.restricted_hessians(&e).unwrap();
        let expect = -((k * (k + 1)) as f64);
        for (i, h) in hess.iter().enumerate() {
            let lap = h[0] + h[2] - 2.0 * f[i];
            assert!((lap - expect * f[i]).abs() < 1e-9 * (1.0 + (expect * f[i]).abs()), "k={k}");
        }
        let l = laplacian(&e);
        for (x, y) in l.block(k).iter().zip(e.block(k)) {
            assert!((x - expect * y).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }
}

// Restricted Hessian = Hessian of the 1-homogeneous extension, by central differences.
#[test]
fn hessian_matches_finite_differences() {
    let d = sphere(10);
    let e = random_band_limited(&d, &mut rng(5), 6);
    let ext = |x: [f64; 3]| -> f64 {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        r * evaluate_expansion_at(&e, [x[0] / r, x[1] / r, x[2] / r]).unwrap().0
    };
    let eps = 1e-4;
    for u in [[0.6, 0.0, 0.8], [0.36, 0.48, -0.8], [-0.5, 0.5, 0.5f64.sqrt()]] {
        let (_, h) = evaluate_expansion_at(&e, u).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let shift = |x: [f64; 3], i: usize, s: f64| {
                    let mut y = x;
                    y[i] += s;
                    y
                };
                let fd = (ext(shift(shift(u, a, eps), b, eps)) - ext(shift(shift(u, a, eps), b, -eps))
                    - ext(shift(shift(u, a, -eps), b, eps))
                    + ext(shift(shift(u, a, -eps), b, -eps)))
                    / (4.0 * eps * eps);
                assert!((fd - h[a][b]).abs() < 2e-5, "u={u:?} ({a},{b}): {fd} vs {}", h[a][b]);
            }
        }
    }
}

#[test]
fn smoothing_examples() {
    let d = sphere(24);
    let mut r = rng(9);
    let low = random_band_limited(&d, &mut r, 5);
    let m = smooth_mj(&low, 5).unwrap();
    assert!(m.sub(&low).unwrap().norm() < 1e-15);

    let full = random_band_limited(&d, &mut r, 24);
    let m = smooth_mj(&full, 12).unwrap();
    assert!(m.sub(&full).unwrap().norm() > 0.0);
    let m = smooth_mj(&full, 24).unwrap();
    assert!(m.sub(&full).unwrap().norm() < 1e-15);

    for j in 1..=11 {
        let mut single = d.zero_expansion();
        single.block_mut(2 * j + 1)[0] = 1.0;
        assert_eq!(smooth_mj(&single, j).unwrap().norm(), 0.0);
        let m = smooth_mj(&full, j).unwrap();
        assert!(m.effective_degree(0.0).unwrap_or(0) < 2 * j);
    }
    assert!(smooth_mj(&full, 0).is_err());
}

#[test]
fn ualpha_examples() {
    let d = sphere(16);
    for alpha in [0.0, 0.5, 2.0] {
        let est = ualpha_norm_estimate(&d, &d.constant(-3.0), alpha).unwrap();
        assert!((est - 3.0).abs() < 1e-12);
    }
    let mut y = d.zero_expansion();
    y.set_grid_coefficient(5, 2, 1.0);
    let sup = d.synthesize(&y).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let est = ualpha_norm_estimate(&d, &y, 0.0).unwrap();
    assert!((est - sup.max(1.0)).abs() < 1e-12);
    let tails = spectral_tails(&y);
    assert!(tails[..5].iter().all(|t| (t - 1.0).abs() < 1e-14));
    assert!(tails[5..].iter().all(|t| *t == 0.0));
}

// ‖f - M_j f‖_est <= C ‖f‖_est j^{-α}: the fitted C stays bounded on a random family.
#[test]
fn smoothing_error_probe() {
    let d = sphere(32);
    let mut r = rng(21);
    for alpha in [0.0, 0.5, 1.0] {
        let mut c_fit = 0.0f64;
        for _ in 0..8 {
            let f = random_expansion(&d, &mut r, 0, 32, 1.0 + alpha);
            let norm = ualpha_norm_estimate(&d, &f, alpha).unwrap();
            for j in [1, 2, 4, 8, 16] {
                let g = f.sub(&smooth_mj(&f, j).unwrap()).unwrap();
                let lhs = ualpha_norm_estimate(&d, &g, alpha).unwrap();
                c_fit = c_fit.max(lhs / (norm * (j as f64).powf(-alpha)));
            }
        }
        assert!(c_fit.is_finite() && c_fit < 16.0, "α={alpha}: C = {c_fit}");
    }
}

#[test]
fn zonal_transform_round_trip() {
    for n in [3, 5, 8] {
        let d = Domain::zonal(n, 30).unwrap();
        let Domain::Zonal(z) = &d else { unreachable!() };
        let c: Vec<f64> = (0..=30).map(|k| 1.0 / (1.0 + k as f64).powi(2)).collect();
        let e = z.from_legendre_coefficients(&c).unwrap();
        let v = d.synthesize(&e).unwrap();
        for (t, val) in z.points().iter().zip(&v) {
            let direct: f64 = c.iter().enumerate().map(|(k, ck)| ck * legendre(n, k, *t).unwrap()).sum();
            assert!((direct - val).abs() < 1e-12);
        }
        let back = z.legendre_coefficients(&d.analyze(&v).unwrap());
        assert!(back.iter().zip(&c).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!((d.total_mass() - sphere_area(n)).abs() < 1e-12);
    }
}
