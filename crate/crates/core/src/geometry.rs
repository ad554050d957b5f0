//! Boundary curves, star-like Fourier shapes, receiver rings, and the
//! trapezoid quadrature they share.
//!
//! Every curve is a closed parameterization `t in [0, 2pi) -> R^2`. The
//! discrete form carries equispaced parameter nodes with arclength trapezoid
//! weights `w_j = (2 pi / n) |x'(t_j)|`, which is spectrally accurate for
//! smooth closed curves.

use crate::error::{Error, Result};
use crate::kernels::Point;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Grid resolution used for every radial positivity check.
const POSITIVITY_GRID: usize = 512;

// --- star-like Fourier shape ----------------------------------------------

/// Star-like boundary `r(t) (cos t, sin t)` with a trigonometric radial
/// function
///
/// ```text
/// r(t) = a_0 + sum_{l=1..M} (a_l cos(l t) + b_l sin(l t)).
/// ```
///
/// Constructors reject radial functions that are not strictly positive on a
/// 512-point grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStar")]
pub struct StarShape {
    /// cosine coefficients a_0..a_M
    a: Vec<f64>,
    /// sine coefficients b_1..b_M
    b: Vec<f64>,
}

#[derive(Deserialize)]
struct RawStar {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawStar> for StarShape {
    type Error = Error;
    fn try_from(raw: RawStar) -> Result<Self> {
        StarShape::new(raw.a, raw.b)
    }
}

impl StarShape {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() + 1 {
            return Err(Error::config(format!(
                "need a_0..a_M plus b_1..b_M, got {} cosine and {} sine coefficients",
                a.len(),
                b.len()
            )));
        }
        let shape = StarShape { a, b };
        let min = shape.min_radius(POSITIVITY_GRID);
        if !(min > 0.0) {
            return Err(Error::geometry(format!(
                "radial function reaches {min:.3e}; boundary must stay strictly positive"
            )));
        }
        Ok(shape)
    }

    /// Circle of the given radius expressed at degree `m`.
    pub fn circle(radius: f64, m: usize) -> Result<Self> {
        let mut a = vec![0.0; m + 1];
        a[0] = radius;
        StarShape::new(a, vec![0.0; m])
    }

    /// Highest retained Fourier degree M.
    pub fn degree(&self) -> usize {
        self.b.len()
    }

    pub fn radius(&self, t: f64) -> f64 {
        let mut r = self.a[0];
        for l in 1..=self.degree() {
            let lt = l as f64 * t;
            r += self.a[l] * lt.cos() + self.b[l - 1] * lt.sin();
        }
        r
    }

    pub fn radius_deriv(&self, t: f64) -> f64 {
        let mut dr = 0.0;
        for l in 1..=self.degree() {
            let lf = l as f64;
            let lt = lf * t;
            dr += lf * (self.b[l - 1] * lt.cos() - self.a[l] * lt.sin());
        }
        dr
    }

    pub fn min_radius(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|j| self.radius(2.0 * PI * j as f64 / grid as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// Flat coefficient vector (a_0, a_1..a_M, b_1..b_M).
    pub fn flat(&self) -> Vec<f64> {
        let mut c = self.a.clone();
        c.extend_from_slice(&self.b);
        c
    }

    /// Rebuilds from the flat layout produced by [`StarShape::flat`].
    pub fn from_flat(m: usize, c: &[f64]) -> Result<Self> {
        if c.len() != 2 * m + 1 {
            return Err(Error::config(format!(
                "flat coefficient vector must have length 2M+1 = {}, got {}",
                2 * m + 1,
                c.len()
            )));
        }
        StarShape::new(c[..=m].to_vec(), c[m + 1..].to_vec())
    }
}

// --- periodic cubic spline ------------------------------------------------

/// C^2 periodic cubic spline through equispaced knots on [0, 2pi).
///
/// Holds the knot values and the spline's second derivatives at the knots;
/// the cyclic tridiagonal system for the latter is solved densely (knot
/// counts here are tiny).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpline")]
pub struct PeriodicSpline {
    values: Vec<f64>,
    second: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpline {
    values: Vec<f64>,
}

impl TryFrom<RawSpline> for PeriodicSpline {
    type Error = Error;
    fn try_from(raw: RawSpline) -> Result<Self> {
        PeriodicSpline::new(raw.values)
    }
}

impl PeriodicSpline {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 3 {
            return Err(Error::config(format!(
                "periodic spline needs at least 3 knots, got {n}"
            )));
        }
        let h = 2.0 * PI / n as f64;
        // m_{i-1} + 4 m_i + m_{i+1} = 6 (r_{i-1} - 2 r_i + r_{i+1}) / h^2
        let mut mat = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for i in 0..n {
            mat[(i, (i + n - 1) % n)] += 1.0;
            mat[(i, i)] += 4.0;
            mat[(i, (i + 1) % n)] += 1.0;
            rhs[i] =
                6.0 * (values[(i + n - 1) % n] - 2.0 * values[i] + values[(i + 1) % n]) / (h * h);
        }
        let second = mat
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::solver("singular periodic spline system".to_string()))?;
        Ok(PeriodicSpline {
            values,
            second: second.iter().copied().collect(),
        })
    }

    pub fn knot_count(&self) -> usize {
        self.values.len()
    }

    pub fn knot_values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, t: f64) -> (usize, f64, f64, f64) {
        let n = self.values.len();
        let h = 2.0 * PI / n as f64;
        let tw = t.rem_euclid(2.0 * PI);
        let i = ((tw / h) as usize).min(n - 1);
        let a = ((i + 1) as f64 * h - tw) / h;
        let b = (tw - i as f64 * h) / h;
        (i, a, b, h)
    }

    pub fn value(&self, t: f64) -> f64 {
        let n = self.values.len();
        let (i, a, b, h) = self.segment(t);
        let j = (i + 1) % n;
        a * self.values[i]
            + b * self.values[j]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[j]) * h * h / 6.0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let n = self.values.len();
        let (i, a, b, h) = self.segment(t);
        let j = (i + 1) % n;
        (self.values[j] - self.values[i]) / h
            + ((1.0 - 3.0 * a * a) * self.second[i] + (3.0 * b * b - 1.0) * self.second[j]) * h
                / 6.0
    }
}

// --- parametric curves ----------------------------------------------------

/// Analytic representation backing a [`ParamCurve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CurveRep {
    /// Origin-centered circle.
    Circle { radius: f64 },
    /// `(1 + amplitude cos(leaves t)) (cos t, sin t)`.
    Leaf { leaves: u32, amplitude: f64 },
    /// `(cos t + 0.65 cos 2t - 0.65, 1.5 sin t)`.
    Kite,
    /// Star-like Fourier boundary.
    Star(StarShape),
    /// Star-like boundary with a periodic-spline radial function.
    Spline(PeriodicSpline),
}

impl CurveRep {
    pub fn point(&self, t: f64) -> Point {
        let (c, s) = (t.cos(), t.sin());
        match self {
            CurveRep::Circle { radius } => Point::new(radius * c, radius * s),
            CurveRep::Leaf { leaves, amplitude } => {
                let rho = 1.0 + amplitude * (f64::from(*leaves) * t).cos();
                Point::new(rho * c, rho * s)
            }
            CurveRep::Kite => Point::new(c + 0.65 * (2.0 * t).cos() - 0.65, 1.5 * s),
            CurveRep::Star(shape) => {
                let rho = shape.radius(t);
                Point::new(rho * c, rho * s)
            }
            CurveRep::Spline(sp) => {
                let rho = sp.value(t);
                Point::new(rho * c, rho * s)
            }
        }
    }

    pub fn tangent(&self, t: f64) -> Point {
        let (c, s) = (t.cos(), t.sin());
        match self {
            CurveRep::Circle { radius } => Point::new(-radius * s, radius * c),
            CurveRep::Leaf { leaves, amplitude } => {
                let lf = f64::from(*leaves);
                let rho = 1.0 + amplitude * (lf * t).cos();
                let drho = -amplitude * lf * (lf * t).sin();
                Point::new(drho * c - rho * s, drho * s + rho * c)
            }
            CurveRep::Kite => Point::new(-s - 1.3 * (2.0 * t).sin(), 1.5 * c),
            CurveRep::Star(shape) => {
                let rho = shape.radius(t);
                let drho = shape.radius_deriv(t);
                Point::new(drho * c - rho * s, drho * s + rho * c)
            }
            CurveRep::Spline(sp) => {
                let rho = sp.value(t);
                let drho = sp.deriv(t);
                Point::new(drho * c - rho * s, drho * s + rho * c)
            }
        }
    }
}

/// Closed curve with an analytic parameterization and a fixed equispaced
/// discretization (nodes, points, arclength trapezoid weights).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamCurve {
    rep: CurveRep,
    nodes: Vec<f64>,
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl ParamCurve {
    pub fn from_rep(rep: CurveRep, n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::config(format!(
                "curve discretization needs at least 3 nodes, got {n_nodes}"
            )));
        }
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut points = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        let dt = 2.0 * PI / n_nodes as f64;
        for j in 0..n_nodes {
            let t = dt * j as f64;
            nodes.push(t);
            points.push(rep.point(t));
            weights.push(dt * rep.tangent(t).norm());
        }
        Ok(ParamCurve {
            rep,
            nodes,
            points,
            weights,
        })
    }

    /// Same analytic curve, re-discretized with `n_nodes` nodes.
    pub fn with_nodes(&self, n_nodes: usize) -> Result<Self> {
        ParamCurve::from_rep(self.rep.clone(), n_nodes)
    }

    pub fn rep(&self) -> &CurveRep {
        &self.rep
    }

    pub fn point(&self, t: f64) -> Point {
        self.rep.point(t)
    }

    pub fn tangent(&self, t: f64) -> Point {
        self.rep.tangent(t)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total quadrature weight (curve length for smooth curves).
    pub fn quadrature_length(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest |point| over the discretization.
    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Smallest |point| over the discretization.
    pub fn min_radius(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

// --- constructors required by the experiments -----------------------------

/// Named obstacle boundaries: `circle` (optionally `circle:radius`),
/// `3-leaf`, `5-leaf`, `kite`.
pub fn make_named_shape(name: &str, n_nodes: usize) -> Result<ParamCurve> {
    let rep = if let Some(radius) = name.strip_prefix("circle") {
        let radius = match radius.strip_prefix(':') {
            None if radius.is_empty() => 1.0,
            Some(r) => r
                .parse::<f64>()
                .map_err(|_| Error::config(format!("bad circle radius in shape name '{name}'")))?,
            _ => return Err(Error::config(format!("unknown shape name '{name}'"))),
        };
        if !(radius > 0.0) {
            return Err(Error::config(format!("circle radius must be positive, got {radius}")));
        }
        CurveRep::Circle { radius }
    } else {
        match name {
            "3-leaf" => CurveRep::Leaf {
                leaves: 3,
                amplitude: 0.2,
            },
            "5-leaf" => CurveRep::Leaf {
                leaves: 5,
                amplitude: 0.2,
            },
            "kite" => CurveRep::Kite,
            _ => return Err(Error::config(format!("unknown shape name '{name}'"))),
        }
    };
    ParamCurve::from_rep(rep, n_nodes)
}

/// Random star-like boundary: knot count drawn from {8..20}, knot radii from
/// U[0.8, 1.8], joined by a periodic cubic spline.
pub fn random_star_shape(seed: u64, n_nodes: usize) -> Result<ParamCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let knots = rng.gen_range(8..=20usize);
    let values: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.8..1.8)).collect();
    ParamCurve::from_rep(CurveRep::Spline(PeriodicSpline::new(values)?), n_nodes)
}

/// Equispaced ring of the given radius: receiver circles, auxiliary curves
/// and source placement circles. Weights are the exact `2 pi radius / count`.
pub fn ring(radius: f64, count: usize) -> Result<ParamCurve> {
    if !(radius > 0.0) {
        return Err(Error::config(format!("ring radius must be positive, got {radius}")));
    }
    if count < 8 {
        return Err(Error::config(format!("ring needs at least 8 nodes, got {count}")));
    }
    ParamCurve::from_rep(CurveRep::Circle { radius }, count)
}

/// Boundary curve of a star shape at `n_nodes` equispaced parameters.
pub fn shape_to_curve(shape: &StarShape, n_nodes: usize) -> Result<ParamCurve> {
    ParamCurve::from_rep(CurveRep::Star(shape.clone()), n_nodes)
}

/// Least-squares Fourier fit of sampled radii (t_j, r_j) at degree `m`.
///
/// Needs at least 2m+1 samples; solved by SVD on the design matrix with rows
/// (1, cos t, .., cos mt, sin t, .., sin mt).
pub fn fit_star(samples: &[(f64, f64)], m: usize) -> Result<StarShape> {
    let cols = 2 * m + 1;
    if samples.len() < cols {
        return Err(Error::config(format!(
            "fitting degree {m} needs at least {cols} samples, got {}",
            samples.len()
        )));
    }
    let mut design = DMatrix::<f64>::zeros(samples.len(), cols);
    let mut rhs = DVector::<f64>::zeros(samples.len());
    for (row, &(t, r)) in samples.iter().enumerate() {
        design[(row, 0)] = 1.0;
        for l in 1..=m {
            design[(row, l)] = (l as f64 * t).cos();
            design[(row, m + l)] = (l as f64 * t).sin();
        }
        rhs[row] = r;
    }
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::solver(format!("Fourier fit failed: {e}")))?;
    StarShape::from_flat(m, coeffs.as_slice())
}

/// Radial profile of a star-like-about-the-origin curve: the boundary radius
/// at `n_angles` equispaced polar angles, by dense polyline sampling and
/// linear interpolation in angle.
pub fn radial_profile(curve: &ParamCurve, n_angles: usize) -> Vec<f64> {
    let dense = 8192usize;
    let mut samples: Vec<(f64, f64)> = (0..dense)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / dense as f64;
            let p = curve.point(t);
            (p.y.atan2(p.x).rem_euclid(2.0 * PI), p.norm())
        })
        .collect();
    samples.sort_by(|u, v| u.0.total_cmp(&v.0));

    (0..n_angles)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_angles as f64;
            // neighbors with wraparound
            let idx = samples.partition_point(|s| s.0 < theta);
            let (t0, r0) = samples[(idx + dense - 1) % dense];
            let (t1, r1) = samples[idx % dense];
            let gap = (t1 - t0).rem_euclid(2.0 * PI);
            if gap < 1e-12 {
                return r1;
            }
            let frac = (theta - t0).rem_euclid(2.0 * PI) / gap;
            r0 + frac * (r1 - r0)
        })
        .collect()
}

// --- sampling grid --------------------------------------------------------

/// Rectangular lattice of sampling points, row-major from the lower-left.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SamplingGrid {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(xmax > xmin && ymax > ymin) || nx < 2 || ny < 2 {
            return Err(Error::config(format!(
                "degenerate sampling grid [{xmin},{xmax}]x[{ymin},{ymax}] at {nx}x{ny}"
            )));
        }
        Ok(SamplingGrid {
            xmin,
            xmax,
            ymin,
            ymax,
            nx,
            ny,
        })
    }

    /// Square grid centered at the origin: `[-half, half]^2` at n x n.
    pub fn centered_square(half: f64, n: usize) -> Result<Self> {
        SamplingGrid::new(-half, half, -half, half, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point at linear index `i` (row-major, x fastest).
    pub fn point(&self, i: usize) -> Point {
        let ix = i % self.nx;
        let iy = i / self.nx;
        Point::new(
            self.xmin + (self.xmax - self.xmin) * ix as f64 / (self.nx - 1) as f64,
            self.ymin + (self.ymax - self.ymin) * iy as f64 / (self.ny - 1) as f64,
        )
    }

    pub fn iter_points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_shape_frozen_points() {
        let leaf = make_named_shape("3-leaf", 64).unwrap();
        let p = leaf.point(0.0);
        assert!((p - Point::new(1.2, 0.0)).norm() < 1e-15);

        let kite = make_named_shape("kite", 64).unwrap();
        let k0 = kite.point(0.0);
        assert!((k0 - Point::new(1.0, 0.0)).norm() < 1e-15);
        let k2 = kite.point(PI / 2.0);
        assert!((k2 - Point::new(-1.3, 1.5)).norm() < 1e-12);
    }

    #[test]
    fn unknown_shape_name_is_rejected() {
        assert!(make_named_shape("pentagon", 64).is_err());
        assert!(make_named_shape("circle:-2", 64).is_err());
    }

    #[test]
    fn ring_nodes_and_weights() {
        let r = ring(10.0, 120).unwrap();
        assert!((r.points()[30] - Point::new(0.0, 10.0)).norm() < 1e-12);
        for &w in r.weights() {
            assert!((w - 2.0 * PI * 10.0 / 120.0).abs() < 1e-12);
        }
        let total: f64 = r.weights().iter().sum();
        assert!((total - 2.0 * PI * 10.0).abs() < 1e-10);

        let aux = ring(0.7, 100).unwrap();
        for &w in aux.weights() {
            assert!((w - 2.0 * PI * 0.7 / 100.0).abs() < 1e-14);
        }
        assert!(ring(-1.0, 64).is_err());
        assert!(ring(1.0, 4).is_err());
    }

    #[test]
    fn curve_length_close_to_quadrature_weight_sum() {
        // smooth closed curves: sum of weights approximates arclength
        let kite = make_named_shape("kite", 256).unwrap();
        // reference length by dense polyline
        let dense = 1 << 16;
        let mut len = 0.0;
        let mut prev = kite.point(0.0);
        for j in 1..=dense {
            let p = kite.point(2.0 * PI * j as f64 / dense as f64);
            len += (p - prev).norm();
            prev = p;
        }
        assert!((kite.quadrature_length() - len).abs() < 0.01 * len);
    }

    #[test]
    fn trapezoid_is_spectrally_exact_on_trig_polynomials() {
        let r = ring(2.0, 64).unwrap();
        // integrand cos(5 t) sin(3 t) has degree 8 < 64: ring integral is 0
        let acc: f64 = r
            .nodes()
            .iter()
            .zip(r.weights())
            .map(|(&t, &w)| w * (5.0 * t).cos() * (3.0 * t).sin())
            .sum();
        assert!(acc.abs() < 1e-12);
        // and the constant integrates to the exact circumference
        let c: f64 = r.weights().iter().sum();
        assert!((c - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn star_shape_positivity_enforced() {
        assert!(StarShape::new(vec![1.0, 0.0, 0.0], vec![0.0, 0.0]).is_ok());
        // a_0 = 0.1 with a_1 = 0.5 dips negative
        assert!(StarShape::new(vec![0.1, 0.5], vec![0.0]).is_err());
    }

    #[test]
    fn star_fit_of_constant_radius() {
        let samples: Vec<(f64, f64)> = (0..32)
            .map(|j| (2.0 * PI * j as f64 / 32.0, 1.0))
            .collect();
        let s = fit_star(&samples, 4).unwrap();
        let c = s.flat();
        assert!((c[0] - 1.0).abs() < 1e-12);
        for v in &c[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn star_fit_round_trip() {
        let shape = StarShape::new(vec![1.1, 0.05, -0.12, 0.07], vec![0.02, -0.04, 0.03]).unwrap();
        let curve = shape_to_curve(&shape, 512).unwrap();
        let samples: Vec<(f64, f64)> = curve
            .nodes()
            .iter()
            .zip(curve.points())
            .map(|(&t, p)| (t, p.norm()))
            .collect();
        let refit = fit_star(&samples, 3).unwrap();
        for (u, v) in shape.flat().iter().zip(refit.flat()) {
            assert!((u - v).abs() < 1e-10, "round trip drifted: {u} vs {v}");
        }
    }

    #[test]
    fn leaf_radial_function_fits_exactly_at_matching_degree() {
        let curve = make_named_shape("3-leaf", 128).unwrap();
        let samples: Vec<(f64, f64)> = curve
            .nodes()
            .iter()
            .zip(curve.points())
            .map(|(&t, p)| (t, p.norm()))
            .collect();
        let fit = fit_star(&samples, 4).unwrap();
        let c = fit.flat();
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert!((c[3] - 0.2).abs() < 1e-12); // cos(3t) coefficient
        for (i, v) in c.iter().enumerate() {
            if i != 0 && i != 3 {
                assert!(v.abs() < 1e-12, "unexpected coefficient {v} at {i}");
            }
        }
    }

    #[test]
    fn random_shape_knots_and_determinism() {
        let a = random_star_shape(7, 256).unwrap();
        let b = random_star_shape(7, 256).unwrap();
        for (p, q) in a.points().iter().zip(b.points()) {
            assert_eq!(p, q);
        }
        let CurveRep::Spline(sp) = a.rep() else {
            panic!("random shape should be spline-backed");
        };
        assert!((8..=20).contains(&sp.knot_count()));
        for &v in sp.knot_values() {
            assert!((0.8..=1.8).contains(&v));
        }
        // spline interpolates its knots
        let n = sp.knot_count();
        for (i, &v) in sp.knot_values().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / n as f64;
            assert!((sp.value(t) - v).abs() < 1e-12);
        }
        // distinct seeds give distinct knot counts most of the time; spot one
        let counts: Vec<usize> = (0..6)
            .map(|s| {
                let c = random_star_shape(s, 64).unwrap();
                let CurveRep::Spline(sp) = c.rep() else {
                    unreachable!()
                };
                sp.knot_count()
            })
            .collect();
        assert!(counts.iter().any(|&c| c != counts[0]));
    }

    #[test]
    fn spline_tangent_matches_differences() {
        let curve = random_star_shape(3, 64).unwrap();
        let h = 1e-6;
        for &t in &[0.3, 1.9, 4.4, 6.1] {
            let fd = (curve.point(t + h) - curve.point(t - h)) / (2.0 * h);
            let an = curve.tangent(t);
            assert!((fd - an).norm() < 1e-6 * an.norm().max(1.0));
        }
    }

    #[test]
    fn radial_profile_of_leaf_matches_its_formula() {
        let curve = make_named_shape("3-leaf", 64).unwrap();
        let prof = radial_profile(&curve, 128);
        for (k, &r) in prof.iter().enumerate() {
            let theta = 2.0 * PI * k as f64 / 128.0;
            let exact = 1.0 + 0.2 * (3.0 * theta).cos();
            assert!((r - exact).abs() < 1e-5, "angle {theta}: {r} vs {exact}");
        }
    }

    #[test]
    fn sampling_grid_layout() {
        let g = SamplingGrid::centered_square(5.0, 200).unwrap();
        assert_eq!(g.len(), 40000);
        assert!((g.point(0) - Point::new(-5.0, -5.0)).norm() < 1e-15);
        assert!((g.point(199) - Point::new(5.0, -5.0)).norm() < 1e-15);
        assert!((g.point(200) - Point::new(-5.0, -5.0 + 10.0 / 199.0)).norm() < 1e-15);
        assert!((g.point(g.len() - 1) - Point::new(5.0, 5.0)).norm() < 1e-15);
        assert!(SamplingGrid::new(1.0, -1.0, 0.0, 1.0, 4, 4).is_err());
    }
}
