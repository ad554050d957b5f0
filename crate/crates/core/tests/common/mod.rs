//! Shared oracles for the integration tests.
//!
//! Everything here is deliberately computed by a different method than the
//! library path it validates: Bessel values come from quadrature of integral
//! representations (the library uses series, recurrences and asymptotic
//! expansions), derivatives from central differences, and PDE residuals from
//! a five-point stencil.

#![allow(dead_code)]

use std::f64::consts::PI;

/// J_n(x) = (1/pi) ∫_0^pi cos(x sin t - n t) dt by the trapezoid rule.
///
/// The integrand continues evenly through both endpoints, so the rule is
/// spectrally accurate here; the aliasing error is of order J_(2N-n)(x),
/// which is zero at f64 for 2N = 2048 and x + n < 250. Absolute accuracy
/// ~1e-14 (quadrature roundoff), so tiny J values need an absolute floor
/// in comparisons.
pub fn oracle_j(n: u32, x: f64) -> f64 {
    let steps = 1024usize;
    let h = PI / steps as f64;
    let f = |t: f64| (x * t.sin() - f64::from(n) * t).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for k in 1..steps {
        s += f(k as f64 * h);
    }
    s * h / PI
}

/// Y_n(x) for x > 0 from the integral representation
///
/// ```text
/// Y_n(x) = (1/pi) ∫_0^pi sin(x sin t - n t) dt
///        - (1/pi) ∫_0^inf (e^(nt) + (-1)^n e^(-nt)) e^(-x sinh t) dt
/// ```
///
/// evaluated directly for n <= 1 and extended upward by the (stable)
/// three-term recurrence. The oscillatory part uses composite Simpson with
/// a node count scaled to the oscillation rate; the monotone tail uses
/// adaptive Simpson on a finite interval chosen so the discarded remainder
/// is below 1e-19.
pub fn oracle_y(n: u32, x: f64) -> f64 {
    assert!(x > 0.0, "oracle_y needs x > 0");
    match n {
        0 => y_direct(0, x),
        1 => y_direct(1, x),
        _ => {
            let mut prev = y_direct(0, x);
            let mut cur = y_direct(1, x);
            for k in 1..n {
                let next = (2.0 * f64::from(k) / x) * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn y_direct(n: u32, x: f64) -> f64 {
    let nf = f64::from(n);

    // oscillatory part on [0, pi]
    let steps = (1600.0 * (x + nf + 10.0)).ceil() as usize / 2 * 2;
    let h = PI / steps as f64;
    let g = |t: f64| (x * t.sin() - nf * t).sin();
    let mut s = g(0.0) + g(PI);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(k as f64 * h);
    }
    let oscillatory = s * h / 3.0 / PI;

    // tail: find T with x sinh T - n T ~ 45, then integrate on [0, T]
    let mut t_max = ((45.0) / x).asinh();
    for _ in 0..4 {
        t_max = ((45.0 + nf * t_max) / x).asinh();
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let tail_f = |t: f64| ((nf * t).exp() + sign * (-nf * t).exp()) * (-x * t.sinh()).exp();
    let tail = adaptive_simpson(&tail_f, 0.0, t_max, 1e-13) / PI;

    oscillatory - tail
}

/// Adaptive Simpson with absolute tolerance, plain interval-halving form.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

use coelast_core::{CVec2, ElasticMedium, Point};
use num_complex::Complex64;

/// Conjugate-linear-in-second-argument inner product on C^2.
pub fn inner(a: &CVec2, b: &CVec2) -> Complex64 {
    a.x * b.x.conj() + a.y * b.y.conj()
}

/// Max-norm residual of the Navier operator applied to `field` at `x`:
///
/// ```text
/// mu Lap u + (lambda + mu) grad div u + omega^2 u
/// ```
///
/// with all second derivatives from central differences of step `h`
/// (a nine-point evaluation). Truncation error is O(h^2 k^4 |u|).
pub fn navier_residual(
    medium: &ElasticMedium,
    field: &impl Fn(Point) -> CVec2,
    x: Point,
    h: f64,
) -> f64 {
    let e1 = Point::new(h, 0.0);
    let e2 = Point::new(0.0, h);
    let c = field(x);
    let xp = field(x + e1);
    let xm = field(x - e1);
    let yp = field(x + e2);
    let ym = field(x - e2);
    let pp = field(x + e1 + e2);
    let pm = field(x + e1 - e2);
    let mp = field(x - e1 + e2);
    let mm = field(x - e1 - e2);

    let h2 = h * h;
    let two = Complex64::from(2.0);
    let d11 = (xp - c * two + xm) / Complex64::from(h2);
    let d22 = (yp - c * two + ym) / Complex64::from(h2);
    let d12 = (pp - pm - mp + mm) / Complex64::from(4.0 * h2);

    let lap = d11 + d22;
    let graddiv = CVec2::new(d11.x + d12.y, d12.x + d22.y);

    let mu = medium.mu();
    let lam = medium.lambda();
    let w2 = medium.omega() * medium.omega();
    let res = lap.map(|v| mu * v) + graddiv.map(|v| (lam + mu) * v) + c.map(|v| w2 * v);
    res.x.norm().max(res.y.norm())
}

/// |Lap f + k^2 f| at `x` via the five-point stencil of step `h`.
pub fn helmholtz_residual(
    k: f64,
    f: &impl Fn(Point) -> Complex64,
    x: Point,
    h: f64,
) -> f64 {
    let e1 = Point::new(h, 0.0);
    let e2 = Point::new(0.0, h);
    let lap =
        (f(x + e1) + f(x - e1) + f(x + e2) + f(x - e2) - 4.0 * f(x)) / Complex64::from(h * h);
    (lap + k * k * f(x)).norm()
}

/// Bisection on a bracketing interval; f(a) and f(b) must differ in sign.
pub fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    assert!(
        fa * fb < 0.0,
        "bisect needs a sign change on [{a}, {b}], got {fa} and {fb}"
    );
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}
