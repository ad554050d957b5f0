//! Validates the Bessel/Hankel implementation against quadrature oracles.

mod common;

use coelast_core::specfun::{bessel_j, bessel_j_deriv, bessel_y, hankel1, hankel1_deriv};
use common::{bisect, oracle_j, oracle_y};
use num_complex::Complex64;

const X_GRID: [f64; 21] = [
    1e-3, 1e-2, 0.1, 0.3, 0.5, 1.0, 2.0, 3.7, 5.0, 8.0, 10.0, 13.0, 16.0, 16.99, 17.01, 18.0,
    25.0, 40.0, 77.0, 120.0, 200.0,
];
const N_GRID: [u32; 6] = [0, 1, 2, 3, 5, 10];

#[test]
fn hankel_matches_oracle_to_1e10_relative() {
    for &x in &X_GRID {
        for &n in &N_GRID {
            let lib = hankel1(n, x).unwrap();
            let orc = Complex64::new(oracle_j(n, x), oracle_y(n, x));
            let rel = (lib - orc).norm() / orc.norm();
            assert!(
                rel < 1e-10,
                "hankel1({n}, {x}) off by {rel:.2e}: {lib} vs oracle {orc}"
            );
        }
    }
}

#[test]
fn j_matches_oracle_with_absolute_floor() {
    // The trapezoid oracle resolves J only down to its own roundoff, so the
    // comparison needs an absolute floor alongside the relative tolerance.
    for &x in &X_GRID {
        for &n in &N_GRID {
            let lib = bessel_j(n, x);
            let orc = oracle_j(n, x);
            let tol = 1e-12 * orc.abs() + 5e-14;
            assert!(
                (lib - orc).abs() < tol,
                "bessel_j({n}, {x}): {lib} vs oracle {orc}"
            );
        }
    }
}

#[test]
fn j_series_miller_asymptotic_crossovers_are_seamless() {
    // the regime switches sit at x = 17 (n <= 1) and x = 17 (n >= 2)
    for n in 0..=12u32 {
        for &x in &[16.999999, 17.000001] {
            let a = bessel_j(n, x);
            let b = oracle_j(n, x);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1e-2));
        }
    }
}

#[test]
fn first_zero_of_j0_from_oracle_bisection() {
    let zero = bisect(&|x| oracle_j(0, x), 2.0, 3.0, 1e-13);
    assert!(
        (zero - 2.404825557695773).abs() < 1e-11,
        "oracle J_0 zero drifted: {zero}"
    );
    assert!(bessel_j(0, zero).abs() < 1e-10);
}

#[test]
fn first_zero_of_y0_from_oracle_bisection() {
    let zero = bisect(&|x| oracle_y(0, x), 0.5, 1.2, 1e-13);
    assert!(
        (zero - 0.8935769662791675).abs() < 1e-10,
        "oracle Y_0 zero drifted: {zero}"
    );
    assert!(bessel_y(0, zero).unwrap().abs() < 1e-9);
}

#[test]
fn y0_at_one_matches_oracle_and_frozen_value() {
    let orc = oracle_y(0, 1.0);
    assert!((orc - 0.08825696421567696).abs() < 1e-13);
    assert!((bessel_y(0, 1.0).unwrap() - orc).abs() < 1e-13);
}

#[test]
fn j_derivative_matches_central_differences() {
    let h = 1e-6;
    for &x in &[0.7, 3.0, 11.0, 19.0, 60.0] {
        for &n in &[0u32, 1, 2, 6] {
            let fd = (bessel_j(n, x + h) - bessel_j(n, x - h)) / (2.0 * h);
            let an = bessel_j_deriv(n, x);
            assert!(
                (fd - an).abs() < 1e-8,
                "J_{n}'({x}): analytic {an} vs FD {fd}"
            );
        }
    }
}

#[test]
fn hankel_derivative_matches_central_differences() {
    let h = 1e-6;
    for &x in &[0.7, 3.0, 11.0, 19.0, 60.0] {
        for &n in &[0u32, 1, 2, 6] {
            let fd = (hankel1(n, x + h).unwrap() - hankel1(n, x - h).unwrap()) / (2.0 * h);
            let an = hankel1_deriv(n, x).unwrap();
            assert!(
                (fd - an).norm() < 1e-7 * an.norm().max(1.0),
                "H_{n}'({x}): analytic {an} vs FD {fd}"
            );
        }
    }
}
