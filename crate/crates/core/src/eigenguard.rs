//! Dirichlet eigenvalue count for the Lame operator inside a disk.
//!
//! Interior resonances of the auxiliary disk would break the layer ansatz,
//! so reconstruction guards against frequencies where the determinant
//!
//! ```text
//! P_n(r) = -k_p k_s r^2 J_n'(k_p r) J_n'(k_s r) + n^2 J_n(k_p r) J_n(k_s r)
//! ```
//!
//! vanishes with r the disk radius. The count N_0 accumulates weight 2n+1
//! per zero below the radius.

use crate::error::{Error, Result};
use crate::kernels::ElasticMedium;
use crate::specfun::{bessel_j, bessel_j_deriv};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Bisection tolerance for zero refinement.
const ZERO_TOL: f64 = 1e-10;

/// Zeros of the modal determinants below a radius, with the weighted count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigencountResult {
    /// Weighted count: sum of 2n+1 over all zeros below the radius.
    pub n0: u64,
    /// zeros[n] lists the zeros of P_n in increasing order.
    pub zeros: Vec<Vec<f64>>,
    /// Highest order scanned (must be zero-free to certify completeness).
    pub n_max: u32,
}

/// Modal determinant P_n at radius r.
pub fn pn(medium: &ElasticMedium, n: u32, r: f64) -> f64 {
    let xp = medium.kp() * r;
    let xs = medium.ks() * r;
    let nf = f64::from(n);
    -xp * xs * bessel_j_deriv(n, xp) * bessel_j_deriv(n, xs)
        + nf * nf * bessel_j(n, xp) * bessel_j(n, xs)
}

/// Zeros of P_n on (0, radius], found by sign-change scan plus bisection.
///
/// `step_divisor` refines the base scan step `min(2 pi / k_s, 0.05)`; the
/// default scan uses divisor 4 and stability checks rerun with 8.
pub fn pn_zeros(medium: &ElasticMedium, n: u32, radius: f64, step_divisor: u32) -> Vec<f64> {
    let step = (2.0 * PI / medium.ks()).min(0.05) / f64::from(step_divisor.max(1));
    let mut zeros = Vec::new();
    let mut r_prev = step;
    let mut f_prev = pn(medium, n, r_prev);
    let mut r = r_prev + step;
    while r_prev < radius {
        let r_clamped = r.min(radius);
        let f = pn(medium, n, r_clamped);
        if f == 0.0 {
            zeros.push(r_clamped);
        } else if f_prev.signum() != f.signum() && f_prev != 0.0 {
            let (mut lo, mut hi) = (r_prev, r_clamped);
            let mut f_lo = f_prev;
            while hi - lo > ZERO_TOL {
                let mid = 0.5 * (lo + hi);
                let f_mid = pn(medium, n, mid);
                if f_mid == 0.0 || f_mid.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        r_prev = r_clamped;
        f_prev = f;
        r += step;
    }
    zeros
}

/// Counts Dirichlet eigenvalues (weight 2n+1 per zero) of the disk of the
/// given radius, scanning modal orders 0..=n_max.
///
/// Errors if order n_max itself still has a zero below the radius; raise
/// n_max until the top order is clean to certify the count is complete.
pub fn count_n0(medium: &ElasticMedium, radius: f64, n_max: u32) -> Result<EigencountResult> {
    count_n0_with_divisor(medium, radius, n_max, 4)
}

/// Same as [`count_n0`] with an explicit scan-step divisor (refinement
/// stability checks pass a larger divisor).
pub fn count_n0_with_divisor(
    medium: &ElasticMedium,
    radius: f64,
    n_max: u32,
    step_divisor: u32,
) -> Result<EigencountResult> {
    if !(radius > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    let mut zeros = Vec::with_capacity(n_max as usize + 1);
    let mut n0 = 0u64;
    for n in 0..=n_max {
        let z = pn_zeros(medium, n, radius, step_divisor);
        if n == n_max && !z.is_empty() {
            return Err(Error::Truncation(format!(
                "order {n_max} still has {} zero(s) below radius {radius}; raise n_max",
                z.len()
            )));
        }
        n0 += (2 * u64::from(n) + 1) * z.len() as u64;
        zeros.push(z);
    }
    Ok(EigencountResult {
        n0,
        zeros,
        n_max,
    })
}

/// Distance from `radius` to the nearest modal-determinant zero across
/// orders 0..=n_max. A near-zero distance means omega^2 sits on a Dirichlet
/// eigenvalue of the disk of that radius and layer ansaetze on it degenerate.
pub fn nearest_zero_distance(medium: &ElasticMedium, radius: f64, n_max: u32) -> f64 {
    let step = (2.0 * PI / medium.ks()).min(0.05) / 4.0;
    let mut dist = f64::INFINITY;
    for n in 0..=n_max {
        for z in pn_zeros(medium, n, radius + 2.0 * step, 4) {
            dist = dist.min((z - radius).abs());
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium(omega: f64) -> ElasticMedium {
        ElasticMedium::new(1.0, 1.0, omega).unwrap()
    }

    #[test]
    fn p0_matches_its_product_form() {
        let med = medium(5.0);
        for &r in &[0.1, 0.4, 0.9, 1.6] {
            let xp = med.kp() * r;
            let xs = med.ks() * r;
            let product = -xp * xs * bessel_j(1, xp) * bessel_j(1, xs);
            assert!((pn(&med, 0, r) - product).abs() < 1e-14 * product.abs().max(1.0));
        }
    }

    #[test]
    fn p0_zeros_are_bessel_j1_zeros() {
        // P_0 factors, so its zeros are j_{1,l}/k_p and j_{1,l}/k_s
        let med = medium(5.0);
        let j1l = [
            3.831_705_970_207_512,
            7.015_586_669_815_619,
            10.173_468_135_062_722,
            13.323_691_936_314_223,
        ];
        let mut expected: Vec<f64> = j1l
            .iter()
            .flat_map(|&z| [z / med.ks(), z / med.kp()])
            .collect();
        expected.retain(|&z| z < 2.5);
        expected.sort_by(f64::total_cmp);
        let found = pn_zeros(&med, 0, 2.5, 4);
        assert_eq!(found.len(), expected.len());
        for (f, e) in found.iter().zip(&expected) {
            assert!((f - e).abs() < 1e-8, "zero {f} vs Bessel zero {e}");
        }
    }

    #[test]
    fn reported_zeros_change_sign_and_are_small() {
        let med = medium(8.0);
        for n in 0..6u32 {
            for &z in &pn_zeros(&med, n, 1.5, 4) {
                let h = 1e-6;
                let left = pn(&med, n, z - h);
                let right = pn(&med, n, z + h);
                assert!(left * right < 0.0, "no sign change across {z} at order {n}");
                let scale = left.abs().max(right.abs()).max(1e-30);
                assert!(pn(&med, n, z).abs() <= 1e-8 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn small_radius_has_empty_count() {
        let med = medium(5.0);
        let res = count_n0(&med, 0.05, 8).unwrap();
        assert_eq!(res.n0, 0);
        assert!(res.zeros.iter().all(Vec::is_empty));
    }

    #[test]
    fn count_is_monotone_in_radius() {
        let med = medium(8.0);
        let mut last = 0;
        for &r in &[0.2, 0.5, 0.7, 1.0, 1.3] {
            let res = count_n0(&med, r, 16).unwrap();
            assert!(res.n0 >= last, "count dropped at radius {r}");
            last = res.n0;
        }
    }

    #[test]
    fn truncation_error_when_top_order_busy() {
        let med = medium(10.0);
        // order 0 certainly has zeros below 1.5, so n_max = 0 must refuse
        assert!(matches!(
            count_n0(&med, 1.5, 0),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn refinement_stable_counts() {
        for &omega in &[5.0, 8.0, 10.0] {
            let med = medium(omega);
            let coarse = count_n0_with_divisor(&med, 0.7, 12, 4).unwrap();
            let fine = count_n0_with_divisor(&med, 0.7, 12, 8).unwrap();
            let finest = count_n0_with_divisor(&med, 0.7, 12, 40).unwrap();
            assert_eq!(coarse.n0, fine.n0, "omega {omega} unstable at 2x");
            assert_eq!(coarse.n0, finest.n0, "omega {omega} unstable at 10x");
            for (a, b) in coarse.zeros.iter().zip(&fine.zeros) {
                assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(b) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }
}
