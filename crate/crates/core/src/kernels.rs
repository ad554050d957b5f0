//! Fundamental solutions of the 2D Helmholtz and Navier equations and the
//! derivative kernels both inversion phases are built from.
//!
//! Everything reduces to radial derivatives of the Helmholtz potential
//!
//! ```text
//! Phi_a(x, z) = (i/4) H_0^(1)(k_a r),   r = |x - z|,  a in {p, s},
//! ```
//!
//! with the compressional and shear wavenumbers `k_p = w/sqrt(lambda + 2 mu)`
//! and `k_s = w/sqrt(mu)`. The displacement Green tensor of the Navier
//! equation `mu Lap u + (lambda + mu) grad div u + w^2 u = 0` is
//!
//! ```text
//! G(x, z) = (1/mu) Phi_s I + (1/w^2) grad grad^T (Phi_s - Phi_p),
//! ```
//!
//! and splits as `G = G_p + G_s` into its compressional and shear parts.
//! Directional structure is carried by the unit vector `dhat = (x - z)/r`,
//! so each kernel needs only `H_0^(1)` and `H_1^(1)` at `k_p r` and `k_s r`.

use crate::error::{Error, Result};
use crate::specfun::hankel1_01;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Point in the plane.
pub type Point = Vector2<f64>;
/// Complex displacement vector.
pub type CVec2 = Vector2<Complex64>;
/// 2x2 complex matrix (Green tensors, kernel blocks).
pub type Mat2c = Matrix2<Complex64>;

/// Closest allowed approach of an evaluation point to a kernel singularity.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Wave mode selector for the two Helmholtz potentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveMode {
    P,
    S,
}

/// Homogeneous isotropic elastic medium at a fixed angular frequency.
///
/// Wavenumbers and wave speeds are derived on demand so they can never fall
/// out of sync with the Lame constants.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawMedium")]
pub struct ElasticMedium {
    lambda: f64,
    mu: f64,
    omega: f64,
}

#[derive(Deserialize)]
struct RawMedium {
    lambda: f64,
    mu: f64,
    omega: f64,
}

impl TryFrom<RawMedium> for ElasticMedium {
    type Error = Error;
    fn try_from(raw: RawMedium) -> Result<Self> {
        ElasticMedium::new(raw.lambda, raw.mu, raw.omega)
    }
}

impl ElasticMedium {
    /// Requires `mu > 0`, `lambda + mu > 0` (2D strong ellipticity) and
    /// `omega > 0`.
    pub fn new(lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::domain(format!("shear constant mu must be positive, got {mu}")));
        }
        if !(lambda + mu > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!(
                "need lambda + mu > 0 for ellipticity, got lambda = {lambda}, mu = {mu}"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!("frequency omega must be positive, got {omega}")));
        }
        Ok(ElasticMedium { lambda, mu, omega })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Compressional wave speed `sqrt(lambda + 2 mu)`.
    pub fn cp(&self) -> f64 {
        (self.lambda + 2.0 * self.mu).sqrt()
    }

    /// Shear wave speed `sqrt(mu)`.
    pub fn cs(&self) -> f64 {
        self.mu.sqrt()
    }

    /// Compressional wavenumber `omega / cp`.
    pub fn kp(&self) -> f64 {
        self.omega / self.cp()
    }

    /// Shear wavenumber `omega / cs`.
    pub fn ks(&self) -> f64 {
        self.omega / self.cs()
    }

    pub fn wavenumber(&self, mode: WaveMode) -> f64 {
        match mode {
            WaveMode::P => self.kp(),
            WaveMode::S => self.ks(),
        }
    }

    pub fn wave_speed(&self, mode: WaveMode) -> f64 {
        match mode {
            WaveMode::P => self.cp(),
            WaveMode::S => self.cs(),
        }
    }
}

/// Point source: location and unit polarization.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSource")]
pub struct SourceSpec {
    location: Point,
    polarization: Point,
}

#[derive(Deserialize)]
struct RawSource {
    location: Point,
    polarization: Point,
}

impl TryFrom<RawSource> for SourceSpec {
    type Error = Error;
    fn try_from(raw: RawSource) -> Result<Self> {
        SourceSpec::new(raw.location, raw.polarization)
    }
}

impl SourceSpec {
    /// Normalizes `direction` to a unit polarization; errors on a near-zero
    /// direction vector.
    pub fn new(location: Point, direction: Point) -> Result<Self> {
        let norm = direction.norm();
        if norm < 1e-14 {
            return Err(Error::domain(
                "polarization direction must be nonzero".to_string(),
            ));
        }
        Ok(SourceSpec {
            location,
            polarization: direction / norm,
        })
    }

    /// Source at `location` polarized along `(cos theta, sin theta)`.
    pub fn from_angle(location: Point, theta: f64) -> Self {
        SourceSpec {
            location,
            polarization: Point::new(theta.cos(), theta.sin()),
        }
    }

    pub fn location(&self) -> Point {
        self.location
    }

    pub fn polarization(&self) -> Point {
        self.polarization
    }

    /// Polarization angle in [0, 2 pi).
    pub fn polarization_angle(&self) -> f64 {
        let a = self.polarization.y.atan2(self.polarization.x);
        if a < 0.0 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a
        }
    }
}

// --- radial derivative pack ----------------------------------------------

/// Radial derivatives of `Phi(r) = (i/4) H_0^(1)(k r)` at one argument.
///
/// `c0..c3` are d^j/dr^j Phi, obtained from the Hankel pair via
/// `H_0' = -H_1` and `H_1' = H_0 - H_1/x`:
///
/// ```text
/// c1 = -(i/4) k H_1
/// c2 = (i/4) (k H_1 / r - k^2 H_0)
/// c3 = (i/4) (k^3 H_1 + k^2 H_0 / r - 2 k H_1 / r^2)
/// ```
#[derive(Clone, Copy)]
struct Radial {
    c0: Complex64,
    c1: Complex64,
    c2: Complex64,
    c3: Complex64,
}

fn radial(k: f64, r: f64) -> Radial {
    let (h0, h1) = hankel1_01(k * r);
    let i4 = Complex64::new(0.0, 0.25);
    Radial {
        c0: i4 * h0,
        c1: -i4 * k * h1,
        c2: i4 * (k * h1 / r - k * k * h0),
        c3: i4 * (k * k * k * h1 + k * k * h0 / r - 2.0 * k * h1 / (r * r)),
    }
}

/// Separation vector with singularity guard.
fn separation(x: Point, z: Point) -> Result<(Point, f64)> {
    let d = x - z;
    let r = d.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::Singularity {
            dist: r,
            guard: SINGULARITY_GUARD,
        });
    }
    Ok((d, r))
}

/// Hessian from radial derivatives: `c2 dd^T + (c1/r)(I - dd^T)`.
fn hess_from_radial(rad: &Radial, dhat: Point, r: f64) -> Mat2c {
    let c1r = rad.c1 / r;
    let aniso = rad.c2 - c1r;
    let mut m = Mat2c::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut v = aniso * (dhat[i] * dhat[j]);
            if i == j {
                v += c1r;
            }
            m[(i, j)] = v;
        }
    }
    m
}

/// Third-derivative tensor slices `T_m[i][j] = d^3 Phi / dx_i dx_j dx_m`:
///
/// ```text
/// T_ijm = A dhat_i dhat_j dhat_m
///       + B (delta_ij dhat_m + delta_im dhat_j + delta_jm dhat_i)
/// A = c3 - 3 c2 / r + 3 c1 / r^2,   B = c2 / r - c1 / r^2
/// ```
fn third_from_radial(rad: &Radial, dhat: Point, r: f64) -> [Mat2c; 2] {
    let a = rad.c3 - 3.0 * rad.c2 / r + 3.0 * rad.c1 / (r * r);
    let b = rad.c2 / r - rad.c1 / (r * r);
    let mut out = [Mat2c::zeros(), Mat2c::zeros()];
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut v = a * (dhat[i] * dhat[j] * dhat[m]);
                if i == j {
                    v += b * dhat[m];
                }
                if i == m {
                    v += b * dhat[j];
                }
                if j == m {
                    v += b * dhat[i];
                }
                out[m][(i, j)] = v;
            }
        }
    }
    out
}

// --- public kernels -------------------------------------------------------

/// Helmholtz potential `Phi_a(x, z) = (i/4) H_0^(1)(k_a |x - z|)`.
pub fn phi(mode: WaveMode, medium: &ElasticMedium, x: Point, z: Point) -> Result<Complex64> {
    let (_, r) = separation(x, z)?;
    Ok(radial(medium.wavenumber(mode), r).c0)
}

/// Gradient in `x`: `-(i/4) k_a H_1^(1)(k_a r) (x - z)/r`.
pub fn grad_phi(mode: WaveMode, medium: &ElasticMedium, x: Point, z: Point) -> Result<CVec2> {
    let (d, r) = separation(x, z)?;
    let rad = radial(medium.wavenumber(mode), r);
    let dhat = d / r;
    Ok(CVec2::new(rad.c1 * dhat.x, rad.c1 * dhat.y))
}

/// Hessian `grad grad^T Phi_a` in `x`.
pub fn hess_phi(mode: WaveMode, medium: &ElasticMedium, x: Point, z: Point) -> Result<Mat2c> {
    let (d, r) = separation(x, z)?;
    let rad = radial(medium.wavenumber(mode), r);
    Ok(hess_from_radial(&rad, d / r, r))
}

/// Compressional part `G_p = -(1/(mu k_s^2)) grad grad^T Phi_p`.
pub fn green_p(medium: &ElasticMedium, x: Point, z: Point) -> Result<Mat2c> {
    let (d, r) = separation(x, z)?;
    let rad = radial(medium.kp(), r);
    let scale = -1.0 / (medium.mu() * medium.ks() * medium.ks());
    Ok(hess_from_radial(&rad, d / r, r).map(|v| scale * v))
}

/// Shear part `G_s = (1/mu) (I + k_s^-2 grad grad^T) Phi_s`.
pub fn green_s(medium: &ElasticMedium, x: Point, z: Point) -> Result<Mat2c> {
    let (d, r) = separation(x, z)?;
    let rad = radial(medium.ks(), r);
    let inv_mu = 1.0 / medium.mu();
    let inv_muks2 = inv_mu / (medium.ks() * medium.ks());
    let mut m = hess_from_radial(&rad, d / r, r).map(|v| inv_muks2 * v);
    m[(0, 0)] += inv_mu * rad.c0;
    m[(1, 1)] += inv_mu * rad.c0;
    Ok(m)
}

/// Navier Green tensor `G = (1/mu) Phi_s I + (1/w^2) grad grad^T (Phi_s - Phi_p)`.
pub fn green(medium: &ElasticMedium, x: Point, z: Point) -> Result<Mat2c> {
    let (d, r) = separation(x, z)?;
    let dhat = d / r;
    let rad_p = radial(medium.kp(), r);
    let rad_s = radial(medium.ks(), r);
    let inv_mu = 1.0 / medium.mu();
    let inv_w2 = 1.0 / (medium.omega() * medium.omega());

    // hess_s - hess_p = aniso dd^T + c1r I in the radial frame
    let c1r = (rad_s.c1 - rad_p.c1) / r;
    let aniso = (rad_s.c2 - rad_p.c2) - c1r;
    let diag = inv_w2 * c1r + inv_mu * rad_s.c0;
    let mut m = Mat2c::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut v = inv_w2 * aniso * (dhat[i] * dhat[j]);
            if i == j {
                v += diag;
            }
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// Spatial gradient of the Green tensor: `[d/dx_1 G, d/dx_2 G]`.
///
/// Needed for the shape derivative of the incident field; follows from
/// `d_m G_ij = (1/mu) d_m Phi_s delta_ij + (1/w^2) T^s_ijm - (1/w^2) T^p_ijm`.
pub fn green_grad(medium: &ElasticMedium, x: Point, z: Point) -> Result<[Mat2c; 2]> {
    let (d, r) = separation(x, z)?;
    let dhat = d / r;
    let rad_p = radial(medium.kp(), r);
    let rad_s = radial(medium.ks(), r);
    let inv_mu = 1.0 / medium.mu();
    let inv_w2 = 1.0 / (medium.omega() * medium.omega());

    let t_p = third_from_radial(&rad_p, dhat, r);
    let t_s = third_from_radial(&rad_s, dhat, r);
    let grad_s = [rad_s.c1 * dhat.x, rad_s.c1 * dhat.y];

    let mut out = [Mat2c::zeros(), Mat2c::zeros()];
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut v = inv_w2 * (t_s[m][(i, j)] - t_p[m][(i, j)]);
                if i == j {
                    v += inv_mu * grad_s[m];
                }
                out[m][(i, j)] = v;
            }
        }
    }
    Ok(out)
}

/// Decomposition kernel of the single-layer ansatz:
///
/// ```text
/// K(x, y) = [ d_x1 Phi_p   d_x2 Phi_s ]
///           [ d_x2 Phi_p  -d_x1 Phi_s ]
/// ```
///
/// Column 1 is the compressional (gradient) probe, column 2 the shear
/// (rotated-gradient) probe.
pub fn kernel_k(medium: &ElasticMedium, x: Point, y: Point) -> Result<Mat2c> {
    let (d, r) = separation(x, y)?;
    let dhat = d / r;
    let gp = radial(medium.kp(), r).c1;
    let gs = radial(medium.ks(), r).c1;
    Ok(Mat2c::new(
        gp * dhat.x,
        gs * dhat.y,
        gp * dhat.y,
        -(gs * dhat.x),
    ))
}

/// Entrywise spatial derivatives `[d/dx_1 K, d/dx_2 K]`, assembled from the
/// Hessians of the two potentials.
pub fn kernel_k_grad(medium: &ElasticMedium, x: Point, y: Point) -> Result<[Mat2c; 2]> {
    let (d, r) = separation(x, y)?;
    let dhat = d / r;
    let hp = hess_from_radial(&radial(medium.kp(), r), dhat, r);
    let hs = hess_from_radial(&radial(medium.ks(), r), dhat, r);
    let dx1 = Mat2c::new(
        hp[(0, 0)],
        hs[(0, 1)],
        hp[(0, 1)],
        -hs[(0, 0)],
    );
    let dx2 = Mat2c::new(
        hp[(0, 1)],
        hs[(1, 1)],
        hp[(1, 1)],
        -hs[(0, 1)],
    );
    Ok([dx1, dx2])
}
