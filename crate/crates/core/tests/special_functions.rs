//! Closed forms in `specfun` against independent quadrature.

use periodlab::quadrature::{integrate, integrate_gk};
use periodlab::specfun::{b_factor, omega, omega_big, script_g, script_k, tail_integral};
use std::f64::consts::{FRAC_PI_2, LN_2};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn script_g_is_the_sine_power_integral() {
    for alpha in [-0.9, -0.5, 0.0, 0.3, 1.0, 2.5, 7.0] {
        let quad = integrate(|t| t.sin().powf(alpha), 0.0, FRAC_PI_2, 1e-13).unwrap().value;
        let gk = integrate_gk(|t| t.sin().powf(alpha), 0.0, FRAC_PI_2, 1e-12).unwrap().value;
        let g = script_g(alpha).unwrap();
        assert!(rel(g, quad) < 1e-11, "alpha={alpha}: {g} vs {quad}");
        assert!(rel(g, gk) < 1e-8, "alpha={alpha}: {g} vs GK {gk}");
    }
}

#[test]
fn script_k_continues_through_minus_one() {
    // K(alpha) = int_0^{pi/2} (sin^alpha - cos t sin^alpha) + ... is finite at -1;
    // compare with the regularized integral int_0^{pi/2} (sin^alpha t - t^alpha) dt + (pi/2)^{alpha+1}/(alpha+1) - 1/(alpha+1)
    for alpha in [-1.5, -1.2, -1.0 + 1e-7, -0.8] {
        let reg = integrate(|t| t.sin().powf(alpha) - t.powf(alpha), 0.0, FRAC_PI_2, 1e-13).unwrap().value;
        let want = reg + (FRAC_PI_2.powf(alpha + 1.0) - 1.0) / (alpha + 1.0);
        let k = script_k(alpha).unwrap();
        assert!((k - want).abs() < 1e-6, "alpha={alpha}: {k} vs {want}");
    }
    let reg = integrate(|t| 1.0 / t.sin() - 1.0 / t, 0.0, FRAC_PI_2, 1e-13).unwrap().value;
    assert!((reg + FRAC_PI_2.ln() - LN_2).abs() < 1e-12);
    assert!((script_k(-1.0).unwrap() - LN_2).abs() < 1e-12);
}

#[test]
fn tail_integral_matches_quadrature_on_a_grid() {
    for alpha in [-1.9, -1.0, -0.5, 0.0, 2.0, 5.5] {
        for big_m in [0.25, 1.0, 4.0] {
            for factor in [1.05, 2.0, 30.0, 1e4] {
                let x = factor * big_m;
                let closed = tail_integral(alpha, big_m, x).unwrap();
                let quad = integrate(|t| t.sin().powf(alpha), (big_m / x).asin(), FRAC_PI_2, 1e-13).unwrap().value;
                assert!(rel(closed, quad) < 1e-9, "alpha={alpha} M={big_m} x={x}: {closed} vs {quad}");
            }
        }
    }
}

#[test]
fn arctanh_branch_remainder_decays_like_inverse_square() {
    // int_{asin(M/x)}^{pi/2} dt / sin t = arctanh(sqrt(1 - M^2/x^2)) = log(2x/M) + O(x^-2)
    let big_m = 2.0;
    let xs: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
    let rem: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let w = (big_m / x).powi(2);
            let y = (1.0 - w).sqrt();
            // arctanh y = log((1 + y)^2 / w) / 2, with 1 - y = w / (1 + y)
            let atanh = 0.5 * ((1.0 + y).powi(2) / w).ln();
            assert!(rel(tail_integral(-1.0, big_m, x).unwrap(), atanh) < 1e-12);
            (tail_integral(-1.0, big_m, x).unwrap() - (2.0 * x / big_m).ln()).abs()
        })
        .collect();
    // fit the slope on the first decades, before the remainder hits rounding
    let slope = (rem[2] / rem[0]).ln() / (xs[2] / xs[0]).ln();
    assert!((slope + 2.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn compensator_limits_and_monotonicity() {
    for x in [2.0f64, 10.0, 1e6] {
        assert_eq!(omega_big(x, -1.0).unwrap(), x.ln());
        assert!(rel(omega(x, -1.0 + 1e-9), x.ln()) < 1e-7);
    }
    assert!((omega(std::f64::consts::E, -1.0) - 1.0).abs() < 1e-15);
    let grid: Vec<f64> = (0..1000).map(|i| -1.99 + 11.99 * i as f64 / 999.0).collect();
    for x in [2.0, 10.0, 100.0] {
        let v: Vec<f64> = grid.iter().map(|&a| omega_big(x, a).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "x={x}");
    }
}

#[test]
fn b_factor_matches_the_lift_integral() {
    // b_1(alpha) = 1 + 1/(alpha+1): x^2 x^alpha + x int_0^x t^alpha dt over x^{alpha+2}
    for alpha in [-3.0, -2.5, -4.2] {
        assert!(rel(b_factor(1, alpha).unwrap(), 1.0 + 1.0 / (alpha + 1.0)) < 1e-14, "alpha={alpha}");
    }
    assert_eq!(b_factor(0, -1.3).unwrap(), 1.0);
}
