//! Direct-sampling recovery of source locations and polarizations from
//! total-field records, and formation of approximate scattered fields.
//!
//! The indicator of a record u against a probe point y and polarization q is
//! the receiver-weighted inner product
//!
//! ```text
//! I(y, q) = sum_r w_r u(x_r) . conj(G(x_r, y) q) = q . m(y),
//! m(y)    = sum_r w_r G(x_r, y)^H u(x_r),
//! ```
//!
//! so the adjoint field m(y) is computed once per probe point and reused for
//! every polarization; |I| peaks near the true source. Location candidates
//! come from two auxiliary polarizations, and a sweep over a half-circle of
//! unit vectors at both candidates picks the polarization and breaks the
//! wrong-candidate degeneracy.

use crate::error::{Error, Result};
use crate::forward::{FieldKind, FieldRecord};
use crate::geometry::SamplingGrid;
use crate::kernels::{self, CVec2, ElasticMedium, Point};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Probe points this close to the receiver ring are excluded from scans.
pub const RING_EXCLUSION: f64 = 0.15;

/// |I| sampled over a grid for one record and one auxiliary polarization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndicatorMap {
    pub grid: SamplingGrid,
    /// |I| per grid point, row-major; 0 at excluded points.
    pub values: Vec<f64>,
    /// Linear index of the maximizer (lowest index on ties).
    pub argmax_index: usize,
    /// Maximizer as a point.
    pub argmax: Point,
    /// Auxiliary polarization the map was computed with.
    pub q: Point,
}

impl IndicatorMap {
    /// CSV lattice `x,y,indicator` for heatmap plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,indicator\n");
        for (i, v) in self.values.iter().enumerate() {
            let p = self.grid.point(i);
            out.push_str(&format!("{},{},{}\n", p.x, p.y, v));
        }
        out
    }
}

/// Location and polarization recovered from one record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceEstimate {
    /// Chosen location.
    pub location: Point,
    /// Chosen polarization, unit, sign-calibrated against the indicator.
    pub polarization: Point,
    /// Per-auxiliary-polarization location candidates.
    pub candidates: [Point; 2],
    /// Which candidate won (index into `candidates`).
    pub chosen: usize,
    /// Winning sweep index; the sweep angle is `angle_index * pi / n_q`.
    pub angle_index: usize,
    /// Sweep resolution used.
    pub n_q: usize,
}

impl SourceEstimate {
    pub fn polarization_angle(&self) -> f64 {
        self.polarization.y.atan2(self.polarization.x)
    }
}

/// Angular distance between two polarization directions, ignoring sign.
pub fn angle_error_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn check_unit(q: Point) -> Result<()> {
    if (q.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "polarization must be a unit vector, |q| = {}",
            q.norm()
        )));
    }
    Ok(())
}

/// Adjoint field m(y): the record paired against the Green tensor columns.
/// The indicator for any unit q is `q . m(y)`.
pub fn adjoint_field(medium: &ElasticMedium, record: &FieldRecord, y: Point) -> Result<CVec2> {
    let mut m = CVec2::zeros();
    for ((&x, &w), u) in record
        .receivers
        .points()
        .iter()
        .zip(record.receivers.weights())
        .zip(&record.values)
    {
        let g = kernels::green(medium, x, y)?;
        // G^H u accumulated column-wise
        m.x += w * (g[(0, 0)].conj() * u.x + g[(1, 0)].conj() * u.y);
        m.y += w * (g[(0, 1)].conj() * u.x + g[(1, 1)].conj() * u.y);
    }
    Ok(m)
}

/// Sampling indicator of a record at probe point y with unit polarization q.
pub fn indicator(
    medium: &ElasticMedium,
    record: &FieldRecord,
    y: Point,
    q: Point,
) -> Result<Complex64> {
    check_unit(q)?;
    let m = adjoint_field(medium, record, y)?;
    Ok(m.x * Complex64::from(q.x) + m.y * Complex64::from(q.y))
}

fn ring_distance(record: &FieldRecord, y: Point) -> f64 {
    (y.norm() - record.receivers.max_radius()).abs()
}

/// |I| over the whole grid for one record; see [`locate_many`] for the
/// batched version that shares Green evaluations across records.
pub fn locate_candidates(
    medium: &ElasticMedium,
    record: &FieldRecord,
    grid: &SamplingGrid,
    q: Point,
) -> Result<IndicatorMap> {
    let mut maps = locate_many(medium, std::slice::from_ref(record), grid, q)?;
    Ok(maps.pop().expect("one map per record"))
}

/// |I| maps for several records over one grid, sharing the per-point Green
/// tensor evaluations across records (the probe does not depend on data).
pub fn locate_many(
    medium: &ElasticMedium,
    records: &[FieldRecord],
    grid: &SamplingGrid,
    q: Point,
) -> Result<Vec<IndicatorMap>> {
    check_unit(q)?;
    if records.is_empty() {
        return Ok(Vec::new());
    }
    if grid.is_empty() {
        return Err(Error::config("empty sampling grid"));
    }
    // all records must share the receiver geometry for the sharing to hold
    let base = &records[0].receivers;
    for rec in records {
        if rec.receivers.node_count() != base.node_count()
            || rec.values.len() != rec.receivers.node_count()
        {
            return Err(Error::config(
                "records must share the receiver geometry and be complete",
            ));
        }
    }

    let qx = Complex64::from(q.x);
    let qy = Complex64::from(q.y);
    // per grid point: evaluate the probe once, apply to every record
    let per_point: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let y = grid.point(i);
            if ring_distance(&records[0], y) < RING_EXCLUSION {
                return Ok(vec![0.0; records.len()]);
            }
            let mut vals = vec![Complex64::default(); records.len()];
            for ((&x, &w), r) in base
                .points()
                .iter()
                .zip(base.weights())
                .zip(0..base.node_count())
            {
                let g = kernels::green(medium, x, y)?;
                let wc = Complex64::from(w);
                // (G q)^H u, accumulated per record
                let gq0 = (g[(0, 0)] * qx + g[(0, 1)] * qy).conj() * wc;
                let gq1 = (g[(1, 0)] * qx + g[(1, 1)] * qy).conj() * wc;
                for (vals_k, rec) in vals.iter_mut().zip(records) {
                    let u = &rec.values[r];
                    *vals_k += gq0 * u.x + gq1 * u.y;
                }
            }
            Ok(vals.iter().map(|v| v.norm()).collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let maps = (0..records.len())
        .map(|k| {
            let values: Vec<f64> = per_point.iter().map(|row| row[k]).collect();
            let mut argmax_index = 0;
            let mut best = f64::NEG_INFINITY;
            for (i, &v) in values.iter().enumerate() {
                if v > best {
                    best = v;
                    argmax_index = i;
                }
            }
            IndicatorMap {
                grid: grid.clone(),
                values,
                argmax_index,
                argmax: grid.point(argmax_index),
                q,
            }
        })
        .collect();
    Ok(maps)
}

/// Polarization sweep at both location candidates.
///
/// Sweeps q_l = (cos(l pi / n_q), sin(l pi / n_q)) for l = 0..n_q-1 at both
/// candidates, keeps the best sweep index per candidate, then the best
/// candidate overall; the winning direction is sign-calibrated so the
/// indicator has positive real part (the peak value of I is a positive
/// multiple of p . q for exact data).
pub fn recover_polarization(
    medium: &ElasticMedium,
    record: &FieldRecord,
    candidates: [Point; 2],
    n_q: usize,
) -> Result<SourceEstimate> {
    if n_q < 2 {
        return Err(Error::config(format!("polarization sweep needs n_q >= 2, got {n_q}")));
    }
    let mut best_per_candidate = [(0usize, 0.0f64, Complex64::default()); 2];
    for (i, &z) in candidates.iter().enumerate() {
        let m = adjoint_field(medium, record, z)?;
        let mut best_l = 0usize;
        let mut best_val = f64::NEG_INFINITY;
        let mut best_ind = Complex64::default();
        for l in 0..n_q {
            let theta = l as f64 * PI / n_q as f64;
            let ind = m.x * Complex64::from(theta.cos()) + m.y * Complex64::from(theta.sin());
            if ind.norm() > best_val {
                best_val = ind.norm();
                best_l = l;
                best_ind = ind;
            }
        }
        best_per_candidate[i] = (best_l, best_val, best_ind);
    }
    let chosen = usize::from(best_per_candidate[1].1 > best_per_candidate[0].1);
    let (angle_index, _, ind) = best_per_candidate[chosen];
    let theta = angle_index as f64 * PI / n_q as f64;
    let mut polarization = Point::new(theta.cos(), theta.sin());
    if ind.re < 0.0 {
        polarization = -polarization;
    }
    Ok(SourceEstimate {
        location: candidates[chosen],
        polarization,
        candidates,
        chosen,
        angle_index,
        n_q,
    })
}

/// Approximate scattered field: the record minus the estimated incident
/// field `G(x, z) q` at every receiver.
pub fn approximate_scattered(
    medium: &ElasticMedium,
    record: &FieldRecord,
    estimate: &SourceEstimate,
) -> Result<FieldRecord> {
    let q = estimate.polarization;
    let qc = CVec2::new(Complex64::from(q.x), Complex64::from(q.y));
    let values = record
        .receivers
        .points()
        .iter()
        .zip(&record.values)
        .map(|(&x, u)| {
            let g = kernels::green(medium, x, estimate.location)?;
            Ok(u - g * qc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldRecord {
        source: record.source,
        kind: FieldKind::Scattered,
        solver_residual: record.solver_residual,
        receivers: record.receivers.clone(),
        values,
    })
}
