//! Bessel and Hankel functions of integer order for real arguments.
//!
//! The wave kernels evaluate `H_0^(1)` and `H_1^(1)` at arguments up to
//! `k_s * diameter`, a few hundred; the eigenvalue guard needs `J_n` of
//! arbitrary order. Three regimes cover this range:
//!
//! - ascending series for `x <= 17`, summed in double-double arithmetic
//!   (the largest series term at x = 17 is ~4.5e5, so plain f64 summation
//!   would lose seven digits to cancellation),
//! - Miller backward recurrence for `J_n`, `n >= 2`, beyond the series range,
//! - Hankel large-argument expansions for `x > 17`, where their optimal
//!   truncation error `~e^(-2x)` is already below 1e-14.
//!
//! `Y_n` for `n >= 2` comes from forward recurrence, which is stable because
//! `Y_n` dominates the recurrence's solution space. All crossovers were
//! checked against an integral-representation oracle (see the test suite)
//! to better than 1e-12 relative.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Series / asymptotic crossover argument.
const SERIES_MAX_X: f64 = 17.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// --- double-double helpers ------------------------------------------------

/// Unevaluated sum `hi + lo` of two doubles, |lo| <= ulp(hi)/2.
///
/// Only the handful of operations the ascending series needs. Roundoff per
/// operation is ~1e-32 relative, which keeps the summed cancellation error
/// far below the f64 target even at the x = 17 crossover.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        let e = (a - (s - v)) + (b - v);
        Dd { hi: s, lo: e }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        let e = a.mul_add(b, -p);
        Dd { hi: p, lo: e }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        Dd::renorm(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn scale(self, c: f64) -> Dd {
        let p = Dd::two_prod(self.hi, c);
        Dd::renorm(p.hi, p.lo + self.lo * c)
    }

    fn div_f64(self, c: f64) -> Dd {
        let q1 = self.hi / c;
        let r = Dd::two_prod(q1, c);
        let rem = ((self.hi - r.hi) - r.lo) + self.lo;
        Dd::renorm(q1, rem / c)
    }

    fn recip_of(k: f64) -> Dd {
        Dd::ONE.div_f64(k)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

// --- ascending series -----------------------------------------------------

/// J_n(x) by its ascending series, x in (0, SERIES_MAX_X].
///
/// J_n(x) = sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!)
fn j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let neg_u = Dd::two_prod(half, half).neg();

    // leading term (x/2)^n / n!
    let mut t = Dd::ONE;
    for k in 1..=n {
        t = t.scale(half).div_f64(f64::from(k));
    }
    if t.hi == 0.0 {
        return 0.0; // underflow: J_n is far below f64 range
    }

    let mut sum = t;
    let mut t_max = t.hi.abs();
    for k in 1..600u32 {
        t = t.mul(neg_u).div_f64(f64::from(k) * f64::from(k + n));
        sum = sum.add(t);
        t_max = t_max.max(t.hi.abs());
        if t.hi.abs() < 1e-34 * t_max {
            break;
        }
    }
    sum.value()
}

/// (J_0, J_1, Y_0, Y_1) by ascending series, x in (0, SERIES_MAX_X].
///
/// The logarithmic series, with H_k the k-th harmonic number:
///
/// ```text
/// Y_0 = (2/pi) [ (ln(x/2) + g) J_0 - sum_{k>=1} H_k c_k ]
/// Y_1 = (2/pi) (ln(x/2) + g) J_1 - 2/(pi x)
///       - (1/pi)(x/2) sum_{k>=0} (H_k + H_{k+1}) d_k
/// ```
///
/// where `c_k = (-u)^k/(k!)^2`, `d_k = (-u)^k/(k!(k+1)!)`, `u = (x/2)^2`,
/// and `g` is the Euler-Mascheroni constant. The shared term recurrences run
/// entirely in double-double so the interior cancellation cannot surface.
fn jy01_series(x: f64) -> (f64, f64, f64, f64) {
    let half = 0.5 * x;
    let neg_u = Dd::two_prod(half, half).neg();

    let mut c = Dd::ONE; // c_k
    let mut d = Dd::ONE; // d_k
    let mut hk1 = Dd::ONE; // H_{k+1}

    let mut j0 = c;
    let mut s0 = Dd::ZERO; // sum H_k c_k
    let mut j1 = d;
    let mut s1 = Dd::ONE; // sum (H_k + H_{k+1}) d_k; k = 0 term is 1*d_0

    let mut t_max = 1.0f64;
    for k in 1..600u32 {
        let kf = f64::from(k);
        c = c.mul(neg_u).div_f64(kf * kf);
        d = d.mul(neg_u).div_f64(kf * (kf + 1.0));
        let h = hk1; // H_k
        hk1 = h.add(Dd::recip_of(kf + 1.0));

        j0 = j0.add(c);
        s0 = s0.add(c.mul(h));
        j1 = j1.add(d);
        s1 = s1.add(d.mul(h.add(hk1)));

        t_max = t_max.max(c.hi.abs());
        if c.hi.abs() < 1e-34 * t_max {
            break;
        }
    }

    let j0v = j0.value();
    let j1v = half * j1.value();
    let l = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * (l * j0v - s0.value());
    let y1 = (2.0 / PI) * l * j1v - 2.0 / (PI * x) - (half / PI) * s1.value();
    (j0v, j1v, y0, y1)
}

// --- Miller backward recurrence -------------------------------------------

/// J_n(x) for n >= 2 beyond the series range.
///
/// Backward recurrence from a start order far enough above max(n, x) that
/// the contaminating Y-solution has decayed below f64 resolution, normalized
/// by J_0(x) + 2 sum_k J_2k(x) = 1. The start margin 9.9*(x/2)^(1/3) puts the
/// Airy-regime separation factor under 1e-18.
fn j_miller(n: u32, x: f64) -> f64 {
    let margin = 14 + (9.9 * (x.max(2.0) * 0.5).cbrt()).ceil() as usize;
    let m_start = (n as usize).max(x as usize + 1) + margin;

    let mut bp = 0.0f64; // b_{k+1}
    let mut bc = 1e-30f64; // b_k
    let mut norm = if m_start % 2 == 0 { 2.0 * bc } else { 0.0 };
    let mut out = if n as usize == m_start { bc } else { 0.0 };

    let mut k = m_start;
    while k > 0 {
        let next = (2.0 * k as f64 / x) * bc - bp;
        bp = bc;
        bc = next;
        k -= 1;
        if k % 2 == 0 {
            norm += 2.0 * bc;
        }
        if k == n as usize {
            out = bc;
        }
        if bc.abs() > 1e250 {
            bp *= 1e-250;
            bc *= 1e-250;
            norm *= 1e-250;
            out *= 1e-250;
        }
    }
    norm -= bc; // bc now holds b_0; norm = b_0 + 2(b_2 + b_4 + ...)
    out / norm
}

// --- large-argument expansions --------------------------------------------

/// Coefficient sums P, Q of the Hankel expansion at order n, x > SERIES_MAX_X.
///
/// ```text
/// J_n(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi)
/// Y_n(x) ~ sqrt(2/(pi x)) (P sin chi + Q cos chi),  chi = x - n pi/2 - pi/4
/// ```
///
/// Terms u_j = a_j(n)/x^j with u_j = u_{j-1} (4n^2 - (2j-1)^2)/(8jx); the
/// series is truncated at its smallest term.
fn pq(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * f64::from(n * n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut u = 1.0f64;
    let mut prev = f64::INFINITY;
    for j in 1..40u32 {
        let jf = f64::from(j);
        let odd = 2.0 * jf - 1.0;
        u *= (mu - odd * odd) / (8.0 * jf * x);
        if u.abs() >= prev {
            break; // divergence onset: stop at the smallest term
        }
        prev = u.abs();
        // sign pattern (-1)^floor(j/2): + + - - + + ...
        let signed = if (j / 2) % 2 == 0 { u } else { -u };
        if j % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if u.abs() < 1e-19 {
            break;
        }
    }
    (p, q)
}

/// (J_n, Y_n) for n <= 1 via the large-argument expansion.
fn jy_asymptotic(n: u32, x: f64) -> (f64, f64) {
    let (p, q) = pq(n, x);
    let chi = x - (0.5 * f64::from(n) + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

// --- public surface -------------------------------------------------------

/// Bessel function of the first kind J_n(x), n >= 0, x >= 0.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    assert!(
        x >= 0.0 && x.is_finite(),
        "bessel_j requires finite x >= 0, got {x}"
    );
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_MAX_X {
        j_series(n, x)
    } else if n <= 1 {
        jy_asymptotic(n, x).0
    } else {
        j_miller(n, x)
    }
}

/// Derivative J_n'(x) via J_0' = -J_1 and J_n' = J_{n-1} - (n/x) J_n.
pub fn bessel_j_deriv(n: u32, x: f64) -> f64 {
    if n == 0 {
        return -bessel_j(1, x);
    }
    assert!(x > 0.0, "bessel_j_deriv requires x > 0 for n >= 1, got {x}");
    bessel_j(n - 1, x) - f64::from(n) / x * bessel_j(n, x)
}

/// Bessel function of the second kind Y_n(x), n >= 0, x > 0.
pub fn bessel_y(n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_y requires x > 0 (logarithmic singularity at 0), got {x}"
        )));
    }
    let (y0, y1) = y01(x);
    Ok(y_upward(n, x, y0, y1))
}

/// (Y_0, Y_1) on the regime split shared with bessel_j.
fn y01(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX_X {
        let (_, _, y0, y1) = jy01_series(x);
        (y0, y1)
    } else {
        (jy_asymptotic(0, x).1, jy_asymptotic(1, x).1)
    }
}

/// Forward recurrence Y_{k+1} = (2k/x) Y_k - Y_{k-1} from (Y_0, Y_1).
fn y_upward(n: u32, x: f64, y0: f64, y1: f64) -> f64 {
    match n {
        0 => y0,
        1 => y1,
        _ => {
            let mut prev = y0;
            let mut cur = y1;
            for k in 1..n {
                let next = (2.0 * f64::from(k) / x) * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Hankel function of the first kind H_n^(1)(x) = J_n(x) + i Y_n(x), x > 0.
pub fn hankel1(n: u32, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "hankel1 requires x > 0, got {x}"
        )));
    }
    if n <= 1 {
        let (h0, h1) = hankel1_01(x);
        return Ok(if n == 0 { h0 } else { h1 });
    }
    Ok(Complex64::new(bessel_j(n, x), bessel_y(n, x)?))
}

/// Derivative H_n^(1)'(x) = H_{n-1}^(1)(x) - (n/x) H_n^(1)(x), with
/// H_0^(1)' = -H_1^(1).
pub fn hankel1_deriv(n: u32, x: f64) -> Result<Complex64> {
    if n == 0 {
        return Ok(-hankel1(1, x)?);
    }
    Ok(hankel1(n - 1, x)? - f64::from(n) / x * hankel1(n, x)?)
}

/// Orders 0 and 1 of H^(1) in one pass: the kernel hot path.
///
/// Every Helmholtz/Navier kernel in this crate reduces to H_0^(1) and
/// H_1^(1) at `k_p r` and `k_s r`, so this pair evaluation carries nearly
/// the whole simulation cost. Panics on x <= 0 (callers guard r).
pub fn hankel1_01(x: f64) -> (Complex64, Complex64) {
    assert!(x > 0.0, "hankel1_01 requires x > 0, got {x}");
    if x <= SERIES_MAX_X {
        let (j0, j1, y0, y1) = jy01_series(x);
        (Complex64::new(j0, y0), Complex64::new(j1, y1))
    } else {
        let (p0, q0) = pq(0, x);
        let (p1, q1) = pq(1, x);
        let chi = x - 0.25 * PI;
        let (s, c) = chi.sin_cos();
        let amp = (2.0 / (PI * x)).sqrt();
        (
            Complex64::new(amp * (p0 * c - q0 * s), amp * (p0 * s + q0 * c)),
            // chi_1 = chi - pi/2 rotates (cos, sin) to (sin, -cos)
            Complex64::new(amp * (p1 * s + q1 * c), amp * (q1 * s - p1 * c)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert_eq!(bessel_j(7, 0.0), 0.0);
    }

    #[test]
    fn j0_first_zero() {
        // frozen from bisection on the oracle in tests/specfun_oracle.rs
        assert!(bessel_j(0, 2.404825557695773).abs() < 1e-10);
    }

    #[test]
    fn y0_at_one() {
        let y = bessel_y(0, 1.0).unwrap();
        assert!((y - 0.08825696421567696).abs() < 1e-14);
    }

    #[test]
    fn y0_first_zero() {
        assert!(bessel_y(0, 0.8935769662791675).unwrap().abs() < 1e-9);
    }

    #[test]
    fn y_diverges_at_small_argument() {
        assert!(bessel_y(1, 1e-12).unwrap() < -1e10);
    }

    #[test]
    fn hankel_at_one() {
        let h = hankel1(0, 1.0).unwrap();
        assert!((h.re - 0.7651976865579666).abs() < 1e-14);
        assert!((h.im - 0.08825696421567696).abs() < 1e-14);
    }

    #[test]
    fn hankel_imag_is_y() {
        for &x in &[0.3, 1.0, 4.5, 12.0, 30.0] {
            let h = hankel1(3, x).unwrap();
            assert_eq!(h.im, bessel_y(3, x).unwrap());
        }
    }

    #[test]
    fn deriv_identity_at_order_zero() {
        for &x in &[0.5, 2.0, 9.0, 25.0] {
            let d = hankel1_deriv(0, x).unwrap();
            let h1 = hankel1(1, x).unwrap();
            assert!((d + h1).norm() < 1e-15 * h1.norm().max(1.0));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_y(0, 0.0).is_err());
        assert!(bessel_y(2, -1.0).is_err());
        assert!(hankel1(0, -3.0).is_err());
    }

    #[test]
    fn pair_evaluation_matches_single_orders() {
        for &x in &[0.01, 0.9, 5.0, 16.9, 17.1, 80.0, 199.0] {
            let (h0, h1) = hankel1_01(x);
            assert_eq!(h0, hankel1(0, x).unwrap());
            assert_eq!(h1, hankel1(1, x).unwrap());
        }
    }

    #[test]
    fn wronskian_spot_check() {
        // J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi x)
        for &x in &[0.5, 1.0, 5.0, 20.0, 100.0] {
            for n in 0..=10u32 {
                let w = bessel_j(n + 1, x) * bessel_y(n, x).unwrap()
                    - bessel_j(n, x) * bessel_y(n + 1, x).unwrap();
                let exact = 2.0 / (PI * x);
                assert!(
                    (w - exact).abs() < 1e-10 * exact.abs(),
                    "wronskian off at n={n}, x={x}: {w} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn recurrence_closure() {
        // J_{n-1} + J_{n+1} = (2n/x) J_n
        for &x in &[0.5, 1.0, 5.0, 20.0, 100.0] {
            for n in 1..=10u32 {
                let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
                let rhs = 2.0 * f64::from(n) / x * bessel_j(n, x);
                let scale = lhs.abs().max(rhs.abs()).max(1e-30);
                assert!(
                    (lhs - rhs).abs() < 1e-10 * scale,
                    "recurrence off at n={n}, x={x}"
                );
            }
        }
    }
}
