//! Gegenbauer-normalized Legendre polynomials `P_k^n` with `P_k^n(1) = 1`,
//! their derivatives, and the sphere constants that go with them.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-12;

/// Evaluates `P_k^n(t)`.
///
/// Works for every `n >= 2` (at `n = 2` these are the Chebyshev polynomials).
/// Arguments slightly outside `[-1, 1]` (by at most `1e-12`) are clamped.
pub fn legendre(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension n = {n} must be at least 2")));
    }
    if !t.is_finite() || t.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain(format!("t = {t} is outside [-1, 1]")));
    }
    Ok(legendre_values(n, k, t.clamp(-1.0, 1.0))[k])
}

/// Values `P_0^n(t), ..., P_kmax^n(t)` by the three-term recurrence
/// `(k+n-2) P_{k+1} = (2k+n-2) t P_k - k P_{k-1}`.
pub fn legendre_values(n: usize, kmax: usize, t: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(1.0);
    if kmax == 0 {
        return p;
    }
    p.push(t);
    let nf = n as f64;
    for k in 1..kmax {
        let kf = k as f64;
        let next = ((2.0 * kf + nf - 2.0) * t * p[k] - kf * p[k - 1]) / (kf + nf - 2.0);
        p.push(next);
    }
    p
}

/// Constant `c` in `d^d/dt^d P_k^n = c * P_{k-d}^{n+2d}`; zero when `d > k`.
pub fn derivative_factor(n: usize, k: usize, order: usize) -> f64 {
    if order > k {
        return 0.0;
    }
    (0..order).fold(1.0, |acc, s| {
        let (kf, nf, sf) = (k as f64, n as f64, s as f64);
        acc * (kf - sf) * (kf + nf + sf - 2.0) / (nf + 2.0 * sf - 1.0)
    })
}

/// `d^order/dt^order P_k^n(t)` for `k = 0..=kmax`.
pub fn legendre_derivative_values(n: usize, kmax: usize, t: f64, order: usize) -> Vec<f64> {
    if order == 0 {
        return legendre_values(n, kmax, t);
    }
    let mut out = vec![0.0; kmax + 1];
    if kmax < order {
        return out;
    }
    let shifted = legendre_values(n + 2 * order, kmax - order, t);
    for k in order..=kmax {
        out[k] = derivative_factor(n, k, order) * shifted[k - order];
    }
    out
}

/// Dimension `N(n, k)` of the space of degree-`k` spherical harmonics on `S^{n-1}`.
pub fn dimension_count(n: usize, k: usize) -> u64 {
    assert!(n >= 2, "dimension_count needs n >= 2");
    if k == 0 {
        return 1;
    }
    if n == 2 {
        return 2;
    }
    // N = (n+2k-2)/(n+k-2) * C(n+k-2, n-2); the product is divisible exactly.
    let c = binomial_u128(n + k - 2, n - 2);
    let num = (n + 2 * k - 2) as u128 * c;
    (num / (n + k - 2) as u128) as u64
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Binomial coefficient as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    binomial_u128(n as usize, k as usize) as f64
}

/// Surface area `omega_m` of the unit sphere `S^{m-1}` in `R^m`.
pub fn sphere_area(m: usize) -> f64 {
    assert!(m >= 1, "sphere_area needs m >= 1");
    2.0 * PI.powf(m as f64 / 2.0) / gamma(m as f64 / 2.0)
}

/// Volume `kappa_m` of the unit ball in `R^m` (`kappa_0 = 1`).
pub fn ball_volume(m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    sphere_area(m) / m as f64
}

/// Eigenvalue of the operator `h + Delta_S h / (n-1)` on degree-`k` harmonics.
pub fn box_multiplier(n: usize, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    (1.0 - kf) * (kf + nf - 1.0) / (nf - 1.0)
}

/// Gamma function. Exact recursion on positive integers and half-integers,
/// Lanczos approximation elsewhere.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && twice == twice.round() && twice <= 340.0 {
        let (mut acc, mut y) = if twice as i64 % 2 == 0 {
            (1.0, 1.0)
        } else {
            (PI.sqrt(), 0.5)
        };
        while y < x {
            acc *= y;
            y += 1.0;
        }
        return acc;
    }
    lanczos_gamma(x)
}

fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        assert_eq!(gamma(5.0), 24.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(2.5) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert!((lanczos_gamma(4.3) - gamma(4.3)).abs() < 1e-12);
        assert!((gamma(1.3) - 0.897_470_696_306_277_2).abs() < 1e-13);
    }

    #[test]
    fn sphere_constants() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-15);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(ball_volume(0), 1.0);
    }

    #[test]
    fn chebyshev_at_n_two() {
        let t: f64 = 0.3;
        let p = legendre_values(2, 6, t);
        for (k, v) in p.iter().enumerate() {
            assert!((v - (k as f64 * t.acos()).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(legendre(3, 2, 1.0 + 1e-9).is_err());
        assert!(legendre(3, 2, 1.0 + 1e-13).is_ok());
        assert!(legendre(1, 2, 0.0).is_err());
    }
}
