//! Experiment orchestration: JSON configuration, dataset simulation, the
//! locate / subtract / reconstruct phases, shape-error metrics, and artifact
//! persistence (manifests, reports, plot CSVs).
//!
//! Every run is seeded and deterministic: identical config and seeds give
//! identical numeric report fields. Wall-clock timings are the one exception
//! and live in their own struct.

use crate::error::{Error, Result};
use crate::forward::{
    add_noise, incident_record, total_record, FieldKind, FieldRecord, ForwardSolverParams,
};
use crate::geometry::{
    make_named_shape, radial_profile, random_star_shape, ring, ParamCurve, SamplingGrid, StarShape,
};
use crate::kernels::{ElasticMedium, Point, SourceSpec};
use crate::shaperec::{
    boundary_residual, fit_densities, polyline_csv, reconstruct, NewtonOptions, NewtonState,
};
use crate::srcrec::{
    angle_error_mod_pi, approximate_scattered, locate_many, recover_polarization, SourceEstimate,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

/// Version stamp written into manifests and reports.
pub const SCHEMA_VERSION: u32 = 1;

/// Samples used for truth profiles, error metrics, and polylines.
pub const METRIC_SAMPLES: usize = 512;

/// Material and frequency.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct MediumConfig {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
}

impl Default for MediumConfig {
    fn default() -> Self {
        Self { lambda: 1.0, mu: 1.0, omega: 8.0 }
    }
}

/// Obstacle selection: a named benchmark shape or a seeded random star.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ObstacleConfig {
    Named { name: String },
    Random { seed: u64 },
}

impl Default for ObstacleConfig {
    fn default() -> Self {
        ObstacleConfig::Named { name: "3-leaf".into() }
    }
}

/// Source placement: an arc of equispaced sources sharing one polarization
/// angle, or an explicit list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SourceConfig {
    Ring {
        count: usize,
        radius: f64,
        /// Angle of the first source.
        #[serde(default)]
        start_angle: f64,
        /// Angular extent. A full turn places sources at spacing span/count
        /// (no duplicated endpoint); anything smaller is an inclusive arc
        /// with spacing span/(count-1).
        #[serde(default = "full_turn")]
        span: f64,
        polarization_angle: f64,
    },
    List {
        items: Vec<SourceItem>,
    },
}

fn full_turn() -> f64 {
    2.0 * PI
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SourceItem {
    pub location: [f64; 2],
    pub polarization_angle: f64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        SourceConfig::Ring {
            count: 12,
            radius: 3.0,
            start_angle: 0.0,
            span: full_turn(),
            polarization_angle: PI / 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ReceiverConfig {
    pub radius: f64,
    pub count: usize,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self { radius: 10.0, count: 120 }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    /// Multiplicative noise level; 0 disables noise.
    pub level: f64,
    /// Base seed; record k uses seed + k.
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { level: 0.05, seed: 1 }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    /// Half-width of the square sampling window centered at the origin.
    pub half_width: f64,
    /// Nodes per axis.
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: 5.0, n: 200 }
    }
}

/// One experiment, fully specified. Defaults mirror the benchmark setup:
/// lambda = mu = 1, receiver ring radius 10 with 120 nodes, 5% noise,
/// 200x200 sampling grid on [-5,5]^2, polarization sweep of 40 angles.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub medium: MediumConfig,
    pub obstacle: ObstacleConfig,
    /// Quadrature nodes on the obstacle boundary for the forward solve.
    pub obstacle_nodes: usize,
    pub sources: SourceConfig,
    pub receivers: ReceiverConfig,
    pub noise: NoiseConfig,
    pub grid: GridConfig,
    /// Polarization sweep resolution (angles l pi / n_q).
    pub n_q: usize,
    /// Angle of the first auxiliary polarization; the second is rotated 90
    /// degrees so the pair always spans the plane.
    pub aux_angle: f64,
    /// Radius of the circular initial guess for the reconstruction.
    pub initial_radius: f64,
    pub newton: NewtonOptions,
    pub forward: ForwardSolverParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            medium: MediumConfig::default(),
            obstacle: ObstacleConfig::default(),
            obstacle_nodes: 256,
            sources: SourceConfig::default(),
            receivers: ReceiverConfig::default(),
            noise: NoiseConfig::default(),
            grid: GridConfig::default(),
            n_q: 40,
            aux_angle: PI / 4.0,
            initial_radius: 1.0,
            newton: NewtonOptions::default(),
            forward: ForwardSolverParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let m = &self.medium;
        if !(m.mu > 0.0) || !(m.lambda + 2.0 * m.mu > 0.0) || !(m.omega > 0.0) {
            return Err(Error::config(
                "medium needs mu > 0, lambda + 2 mu > 0, omega > 0",
            ));
        }
        if let ObstacleConfig::Named { name } = &self.obstacle {
            make_named_shape(name, 16)?;
        }
        if self.obstacle_nodes < 16 {
            return Err(Error::config("obstacle needs at least 16 boundary nodes"));
        }
        match &self.sources {
            SourceConfig::Ring { count, radius, span, .. } => {
                if *count == 0 {
                    return Err(Error::config("source ring needs at least one source"));
                }
                if !(*radius > 0.0) {
                    return Err(Error::config("source ring radius must be positive"));
                }
                if !(*span > 0.0 && *span <= 2.0 * PI + 1e-12) {
                    return Err(Error::config("source span must lie in (0, 2 pi]"));
                }
            }
            SourceConfig::List { items } => {
                if items.is_empty() {
                    return Err(Error::config("source list must not be empty"));
                }
            }
        }
        if !(self.receivers.radius > 0.0) || self.receivers.count < 8 {
            return Err(Error::config("receiver ring needs radius > 0 and >= 8 nodes"));
        }
        if self.noise.level < 0.0 {
            return Err(Error::config("noise level must be >= 0"));
        }
        if !(self.grid.half_width > 0.0) || self.grid.n < 2 {
            return Err(Error::config("sampling grid needs half_width > 0 and n >= 2"));
        }
        if self.n_q < 2 {
            return Err(Error::config("polarization sweep needs n_q >= 2"));
        }
        if !(self.initial_radius > 0.0) {
            return Err(Error::config("initial guess radius must be positive"));
        }
        self.newton.validate()?;
        self.forward.validate()?;
        Ok(())
    }

    pub fn medium(&self) -> Result<ElasticMedium> {
        ElasticMedium::new(self.medium.lambda, self.medium.mu, self.medium.omega)
    }

    pub fn obstacle_curve(&self) -> Result<ParamCurve> {
        match &self.obstacle {
            ObstacleConfig::Named { name } => make_named_shape(name, self.obstacle_nodes),
            ObstacleConfig::Random { seed } => random_star_shape(*seed, self.obstacle_nodes),
        }
    }

    pub fn receiver_curve(&self) -> Result<ParamCurve> {
        ring(self.receivers.radius, self.receivers.count)
    }

    pub fn sampling_grid(&self) -> Result<SamplingGrid> {
        SamplingGrid::centered_square(self.grid.half_width, self.grid.n)
    }

    /// Expands the source spec into concrete sources, in file order.
    pub fn source_specs(&self) -> Vec<SourceSpec> {
        match &self.sources {
            SourceConfig::Ring { count, radius, start_angle, span, polarization_angle } => {
                let n = *count;
                let closed = (*span - 2.0 * PI).abs() <= 1e-9;
                (0..n)
                    .map(|k| {
                        let step = if closed {
                            span / n as f64
                        } else if n > 1 {
                            span / (n - 1) as f64
                        } else {
                            0.0
                        };
                        let a = start_angle + step * k as f64;
                        SourceSpec::from_angle(
                            Point::new(radius * a.cos(), radius * a.sin()),
                            *polarization_angle,
                        )
                    })
                    .collect()
            }
            SourceConfig::List { items } => items
                .iter()
                .map(|it| {
                    SourceSpec::from_angle(
                        Point::new(it.location[0], it.location[1]),
                        it.polarization_angle,
                    )
                })
                .collect(),
        }
    }

    /// The two auxiliary localization polarizations (orthogonal pair).
    pub fn aux_polarizations(&self) -> [Point; 2] {
        let a = self.aux_angle;
        [
            Point::new(a.cos(), a.sin()),
            Point::new(-a.sin(), a.cos()),
        ]
    }
}

/// Truth record written next to the simulated data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub config: ExperimentConfig,
    pub truth_sources: Vec<SourceSpec>,
    /// Radial profile of the true boundary on equispaced angles.
    pub truth_radial: Vec<f64>,
    /// True boundary polyline.
    pub truth_polyline: Vec<[f64; 2]>,
    /// Record file names, one per source, in source order.
    pub records: Vec<String>,
}

/// Per-source recovery outcome against the manifest truth.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceReport {
    pub truth_location: [f64; 2],
    pub truth_angle: f64,
    pub estimated_location: [f64; 2],
    pub location_error: f64,
    pub estimated_angle: f64,
    /// Polarization angle error modulo pi.
    pub angle_error: f64,
    pub chosen_candidate: usize,
}

/// Radial error split between the source-facing and shadow halves of the
/// boundary, for partial-illumination runs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IlluminationSplit {
    pub illuminated_rms: f64,
    pub shadow_rms: f64,
}

/// Wall-clock seconds per phase; excluded from reproducibility comparisons.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub simulate: f64,
    pub locate: f64,
    pub reconstruct: f64,
}

/// Everything a run produced, in one serializable report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub mode: String,
    pub sources: Vec<SourceReport>,
    pub shape: Option<StarShape>,
    pub radial_l2_error: Option<f64>,
    pub hausdorff: Option<f64>,
    pub e_history: Vec<f64>,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    /// Initial-to-final ratio of the boundary max-residual.
    pub residual_drop: Option<f64>,
    pub illumination: Option<IlluminationSplit>,
    pub timings: Timings,
    /// Non-fatal problems encountered along the way.
    pub failures: Vec<String>,
}

impl RunReport {
    fn new(mode: &str) -> Self {
        Self {
            version: SCHEMA_VERSION,
            mode: mode.into(),
            sources: Vec::new(),
            shape: None,
            radial_l2_error: None,
            hausdorff: None,
            e_history: Vec::new(),
            converged: None,
            iterations: None,
            residual_drop: None,
            illumination: None,
            timings: Timings::default(),
            failures: Vec::new(),
        }
    }
}

/// Relative L2 error of the radial function against a truth curve, over
/// equispaced angles.
pub fn radial_l2_error(truth: &ParamCurve, shape: &StarShape) -> f64 {
    let profile = radial_profile(truth, METRIC_SAMPLES);
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, &r) in profile.iter().enumerate() {
        let t = 2.0 * PI * k as f64 / METRIC_SAMPLES as f64;
        let d = shape.radius(t) - r;
        num += d * d;
        den += r * r;
    }
    (num / den).sqrt()
}

/// Symmetric Hausdorff distance between the shape and a truth curve, on
/// equispaced polylines.
pub fn hausdorff_distance(truth: &ParamCurve, shape: &StarShape) -> f64 {
    let a: Vec<Point> = (0..METRIC_SAMPLES)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / METRIC_SAMPLES as f64;
            Point::new(shape.radius(t) * t.cos(), shape.radius(t) * t.sin())
        })
        .collect();
    let b: Vec<Point> = (0..METRIC_SAMPLES)
        .map(|k| truth.point(2.0 * PI * k as f64 / METRIC_SAMPLES as f64))
        .collect();
    let one_way = |p: &[Point], q: &[Point]| -> f64 {
        p.iter()
            .map(|x| {
                q.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    one_way(&a, &b).max(one_way(&b, &a))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// Simulates total-field measurements for every configured source and writes
/// the dataset (records plus truth manifest) into `out_dir`.
pub fn run_simulate(config: &ExperimentConfig, out_dir: &Path) -> Result<DatasetManifest> {
    config.validate()?;
    let medium = config.medium()?;
    let obstacle = config.obstacle_curve()?;
    let receivers = config.receiver_curve()?;
    let sources = config.source_specs();

    let mut records = Vec::with_capacity(sources.len());
    let mut names = Vec::with_capacity(sources.len());
    for (k, source) in sources.iter().enumerate() {
        let clean = total_record(&medium, &obstacle, source, &receivers, &config.forward)?;
        let record = if config.noise.level > 0.0 {
            add_noise(&clean, config.noise.level, config.noise.seed + k as u64)?
        } else {
            clean
        };
        let name = format!("record_{k}.json");
        write_json(out_dir, &name, &record)?;
        names.push(name);
        records.push(record);
    }

    let manifest = DatasetManifest {
        version: SCHEMA_VERSION,
        config: config.clone(),
        truth_sources: sources,
        truth_radial: radial_profile(&obstacle, METRIC_SAMPLES),
        truth_polyline: (0..METRIC_SAMPLES)
            .map(|k| {
                let p = obstacle.point(2.0 * PI * k as f64 / METRIC_SAMPLES as f64);
                [p.x, p.y]
            })
            .collect(),
        records: names,
    };
    write_json(out_dir, "manifest.json", &manifest)?;
    Ok(manifest)
}

/// Loads a dataset written by [`run_simulate`].
pub fn load_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<FieldRecord>)> {
    let manifest: DatasetManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.version != SCHEMA_VERSION {
        return Err(Error::config(format!(
            "dataset schema version {} does not match {}",
            manifest.version, SCHEMA_VERSION
        )));
    }
    let mut records = Vec::with_capacity(manifest.records.len());
    for name in &manifest.records {
        let rec: FieldRecord = serde_json::from_str(&std::fs::read_to_string(dir.join(name))?)?;
        records.push(rec);
    }
    if records.len() != manifest.truth_sources.len() {
        return Err(Error::config(
            "dataset has a different number of records and truth sources",
        ));
    }
    Ok((manifest, records))
}

fn locate_phase(
    manifest: &DatasetManifest,
    records: &[FieldRecord],
    out_dir: Option<&Path>,
    report: &mut RunReport,
) -> Result<Vec<SourceEstimate>> {
    let config = &manifest.config;
    let medium = config.medium()?;
    let grid = config.sampling_grid()?;
    let [q1, q2] = config.aux_polarizations();

    let maps1 = locate_many(&medium, records, &grid, q1)?;
    let maps2 = locate_many(&medium, records, &grid, q2)?;

    let mut estimates = Vec::with_capacity(records.len());
    for (k, record) in records.iter().enumerate() {
        let candidates = [maps1[k].argmax, maps2[k].argmax];
        let estimate = recover_polarization(&medium, record, candidates, config.n_q)?;
        if let Some(dir) = out_dir {
            write_text(dir, &format!("indicator_{k}_q1.csv"), &maps1[k].to_csv())?;
            write_text(dir, &format!("indicator_{k}_q2.csv"), &maps2[k].to_csv())?;
        }
        let truth = &manifest.truth_sources[k];
        let dz = estimate.location - truth.location();
        report.sources.push(SourceReport {
            truth_location: [truth.location().x, truth.location().y],
            truth_angle: truth.polarization_angle(),
            estimated_location: [estimate.location.x, estimate.location.y],
            location_error: dz.norm(),
            estimated_angle: estimate.polarization_angle(),
            angle_error: angle_error_mod_pi(
                estimate.polarization_angle(),
                truth.polarization_angle(),
            ),
            chosen_candidate: estimate.chosen,
        });
        estimates.push(estimate);
    }
    Ok(estimates)
}

/// Illuminated/shadow radial split for arc-confined source configurations.
/// A boundary angle counts as illuminated when its direction has positive
/// inner product with the arc's midpoint direction.
fn illumination_split(
    config: &ExperimentConfig,
    truth_radial: &[f64],
    shape: &StarShape,
) -> Option<IlluminationSplit> {
    let (start, span) = match &config.sources {
        SourceConfig::Ring { start_angle, span, .. } if *span < 2.0 * PI - 1e-9 => {
            (*start_angle, *span)
        }
        _ => return None,
    };
    let mid = start + 0.5 * span;
    let n = truth_radial.len();
    let mut lit = (0.0, 0usize);
    let mut dark = (0.0, 0usize);
    for (k, &r) in truth_radial.iter().enumerate() {
        let t = 2.0 * PI * k as f64 / n as f64;
        let d = shape.radius(t) - r;
        if (t - mid).cos() >= 0.0 {
            lit.0 += d * d;
            lit.1 += 1;
        } else {
            dark.0 += d * d;
            dark.1 += 1;
        }
    }
    if lit.1 == 0 || dark.1 == 0 {
        return None;
    }
    Some(IlluminationSplit {
        illuminated_rms: (lit.0 / lit.1 as f64).sqrt(),
        shadow_rms: (dark.0 / dark.1 as f64).sqrt(),
    })
}

fn reconstruct_phase(
    manifest: &DatasetManifest,
    scattered: &[FieldRecord],
    sources: &[SourceSpec],
    out_dir: Option<&Path>,
    report: &mut RunReport,
) -> Result<NewtonState> {
    let config = &manifest.config;
    let medium = config.medium()?;
    let initial = StarShape::circle(config.initial_radius, config.newton.fourier_degree)?;
    let state = reconstruct(&medium, scattered, sources, &initial, &config.newton)?;

    // boundary residual drop, initial guess vs final iterate
    let (system, densities) = fit_densities(&medium, scattered, &config.newton)?;
    let res0 = boundary_residual(&system, &densities, sources, &initial, 128)?;
    let res1 = boundary_residual(&system, &densities, sources, &state.shape, 128)?;

    report.shape = Some(state.shape.clone());
    report.e_history = state.history.clone();
    report.converged = Some(state.converged);
    report.iterations = Some(state.iteration);
    report.residual_drop = (res1 > 0.0).then(|| res0 / res1);
    if !state.converged {
        report
            .failures
            .push(format!("no convergence within {} iterations", config.newton.max_iter));
    }

    let truth = config.obstacle_curve()?;
    report.radial_l2_error = Some(radial_l2_error(&truth, &state.shape));
    report.hausdorff = Some(hausdorff_distance(&truth, &state.shape));
    report.illumination = illumination_split(config, &manifest.truth_radial, &state.shape);

    if let Some(dir) = out_dir {
        write_text(dir, "boundary_truth.csv", &polyline_board(&manifest.truth_polyline))?;
        write_text(dir, "boundary_final.csv", &polyline_csv(&state.shape, METRIC_SAMPLES))?;
        let mut history = String::from("iteration,t,x,y\n");
        for (i, shape) in state.shape_history.iter().enumerate() {
            for j in 0..128 {
                let t = 2.0 * PI * j as f64 / 128.0;
                let r = shape.radius(t);
                history.push_str(&format!("{i},{t},{},{}\n", r * t.cos(), r * t.sin()));
            }
        }
        write_text(dir, "boundary_history.csv", &history)?;
        let mut e_csv = String::from("iteration,e\n");
        for (i, e) in state.history.iter().enumerate() {
            e_csv.push_str(&format!("{},{e}\n", i + 1));
        }
        write_text(dir, "e_history.csv", &e_csv)?;
    }
    Ok(state)
}

fn polyline_board(points: &[[f64; 2]]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p[0], p[1]));
    }
    out
}

/// Source localization only (the obstacle is left alone).
pub fn run_locate(
    manifest: &DatasetManifest,
    records: &[FieldRecord],
    out_dir: Option<&Path>,
) -> Result<RunReport> {
    manifest.config.validate()?;
    if records.is_empty() {
        return Err(Error::config("dataset holds no records"));
    }
    let mut report = RunReport::new("locate");
    let t0 = Instant::now();
    locate_phase(manifest, records, out_dir, &mut report)?;
    report.timings.locate = t0.elapsed().as_secs_f64();
    if let Some(dir) = out_dir {
        write_json(dir, "report.json", &report)?;
    }
    Ok(report)
}

/// Full co-inversion: locate sources, subtract the estimated incident
/// fields, then reconstruct the obstacle from the approximate scattered
/// records using the estimated sources.
pub fn run_coinvert(
    manifest: &DatasetManifest,
    records: &[FieldRecord],
    out_dir: Option<&Path>,
) -> Result<RunReport> {
    manifest.config.validate()?;
    if records.is_empty() {
        return Err(Error::config("dataset holds no records"));
    }
    let medium = manifest.config.medium()?;
    let mut report = RunReport::new("coinvert");

    let t0 = Instant::now();
    let estimates = locate_phase(manifest, records, out_dir, &mut report)?;
    report.timings.locate = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let scattered = records
        .iter()
        .zip(&estimates)
        .map(|(rec, est)| approximate_scattered(&medium, rec, est))
        .collect::<Result<Vec<_>>>()?;
    let est_sources: Vec<SourceSpec> = estimates
        .iter()
        .map(|e| SourceSpec::new(e.location, e.polarization))
        .collect::<Result<Vec<_>>>()?;
    reconstruct_phase(manifest, &scattered, &est_sources, out_dir, &mut report)?;
    report.timings.reconstruct = t1.elapsed().as_secs_f64();

    if let Some(dir) = out_dir {
        write_json(dir, "report.json", &report)?;
    }
    Ok(report)
}

/// Obstacle reconstruction with the true sources: subtracts the exact
/// incident fields and skips localization entirely.
pub fn run_obstacle_only(
    manifest: &DatasetManifest,
    records: &[FieldRecord],
    out_dir: Option<&Path>,
) -> Result<RunReport> {
    manifest.config.validate()?;
    if records.is_empty() {
        return Err(Error::config("dataset holds no records"));
    }
    let medium = manifest.config.medium()?;
    let mut report = RunReport::new("obstacle-only");

    let t1 = Instant::now();
    let scattered = records
        .iter()
        .zip(&manifest.truth_sources)
        .map(|(rec, src)| {
            let inc = incident_record(&medium, src, &rec.receivers)?;
            let values = rec
                .values
                .iter()
                .zip(&inc.values)
                .map(|(u, ui)| u - ui)
                .collect();
            Ok(FieldRecord {
                source: *src,
                kind: FieldKind::Scattered,
                solver_residual: rec.solver_residual,
                receivers: rec.receivers.clone(),
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    reconstruct_phase(manifest, &scattered, &manifest.truth_sources, out_dir, &mut report)?;
    report.timings.reconstruct = t1.elapsed().as_secs_f64();

    if let Some(dir) = out_dir {
        write_json(dir, "report.json", &report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        // small counts keep the unit tests fast; integration tests use the
        // benchmark scale
        ExperimentConfig {
            medium: MediumConfig { lambda: 1.0, mu: 1.0, omega: 3.0 },
            obstacle: ObstacleConfig::Named { name: "circle".into() },
            obstacle_nodes: 64,
            sources: SourceConfig::Ring {
                count: 2,
                radius: 3.0,
                start_angle: 0.0,
                span: full_turn(),
                polarization_angle: 0.5,
            },
            receivers: ReceiverConfig { radius: 10.0, count: 40 },
            noise: NoiseConfig { level: 0.05, seed: 9 },
            grid: GridConfig { half_width: 5.0, n: 21 },
            n_q: 8,
            forward: ForwardSolverParams {
                n_charge: 60,
                n_colloc: 120,
                ..ForwardSolverParams::default()
            },
            newton: NewtonOptions {
                fourier_degree: 3,
                collocation: 16,
                max_iter: 3,
                aux_nodes: 40,
                ..NewtonOptions::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn ring_sources_are_equispaced_on_a_full_turn() {
        let cfg = ExperimentConfig::default();
        let sources = cfg.source_specs();
        assert_eq!(sources.len(), 12);
        for (k, s) in sources.iter().enumerate() {
            let a = 2.0 * PI * k as f64 / 12.0;
            let expect = Point::new(3.0 * a.cos(), 3.0 * a.sin());
            assert!((s.location() - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn arc_sources_include_both_endpoints() {
        let cfg = ExperimentConfig {
            sources: SourceConfig::Ring {
                count: 5,
                radius: 3.0,
                start_angle: 0.0,
                span: 4.0 * PI / 3.0,
                polarization_angle: 0.0,
            },
            ..ExperimentConfig::default()
        };
        let sources = cfg.source_specs();
        assert_eq!(sources.len(), 5);
        let last = sources[4].location();
        let expect = Point::new(3.0 * (4.0 * PI / 3.0).cos(), 3.0 * (4.0 * PI / 3.0).sin());
        assert!((last - expect).norm() < 1e-12);
        // spacing 60 degrees
        let second = sources[1].location();
        assert!((second - Point::new(3.0 * 0.5, 3.0 * 0.75f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn aux_polarizations_are_an_orthonormal_pair() {
        let cfg = ExperimentConfig::default();
        let [q1, q2] = cfg.aux_polarizations();
        assert!((q1.norm() - 1.0).abs() < 1e-12);
        assert!((q2.norm() - 1.0).abs() < 1e-12);
        assert!(q1.dot(&q2).abs() < 1e-12);
    }

    #[test]
    fn default_config_round_trips_through_json() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn empty_json_object_yields_the_full_default_config() {
        let cfg: ExperimentConfig = serde_json::from_str("{}").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.n_q, 40);
        assert_eq!(cfg.receivers.count, 120);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.n_q = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.noise.level = -0.1;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.obstacle = ObstacleConfig::Named { name: "dodecahedron".into() };
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.sources = SourceConfig::List { items: vec![] };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn simulate_writes_one_record_per_source_and_a_manifest() {
        let dir = std::env::temp_dir().join("coelast-pipe-sim");
        let _ = std::fs::remove_dir_all(&dir);
        let cfg = tiny_config();
        let manifest = run_simulate(&cfg, &dir).unwrap();
        assert_eq!(manifest.records.len(), 2);
        assert_eq!(manifest.truth_sources.len(), 2);
        assert_eq!(manifest.truth_radial.len(), METRIC_SAMPLES);
        let (loaded, records) = load_dataset(&dir).unwrap();
        assert_eq!(loaded.records, manifest.records);
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].kind, FieldKind::Total);
        // circle truth radial profile is identically 1
        assert!(manifest.truth_radial.iter().all(|&r| (r - 1.0).abs() < 1e-9));
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn simulation_is_deterministic_for_fixed_seeds() {
        let dir_a = std::env::temp_dir().join("coelast-pipe-det-a");
        let dir_b = std::env::temp_dir().join("coelast-pipe-det-b");
        let _ = std::fs::remove_dir_all(&dir_a);
        let _ = std::fs::remove_dir_all(&dir_b);
        let cfg = tiny_config();
        run_simulate(&cfg, &dir_a).unwrap();
        run_simulate(&cfg, &dir_b).unwrap();
        let a = std::fs::read_to_string(dir_a.join("record_0.json")).unwrap();
        let b = std::fs::read_to_string(dir_b.join("record_0.json")).unwrap();
        assert_eq!(a, b);
        let _ = std::fs::remove_dir_all(&dir_a);
        let _ = std::fs::remove_dir_all(&dir_b);
    }

    #[test]
    fn zero_noise_reruns_are_byte_identical_across_seeds() {
        let dir_a = std::env::temp_dir().join("coelast-pipe-z-a");
        let dir_b = std::env::temp_dir().join("coelast-pipe-z-b");
        let _ = std::fs::remove_dir_all(&dir_a);
        let _ = std::fs::remove_dir_all(&dir_b);
        let mut cfg = tiny_config();
        cfg.noise.level = 0.0;
        cfg.noise.seed = 1;
        run_simulate(&cfg, &dir_a).unwrap();
        cfg.noise.seed = 999;
        run_simulate(&cfg, &dir_b).unwrap();
        let a = std::fs::read_to_string(dir_a.join("record_1.json")).unwrap();
        let b = std::fs::read_to_string(dir_b.join("record_1.json")).unwrap();
        assert_eq!(a, b);
        let _ = std::fs::remove_dir_all(&dir_a);
        let _ = std::fs::remove_dir_all(&dir_b);
    }

    #[test]
    fn metrics_vanish_on_the_exact_shape() {
        let truth = make_named_shape("circle", 128).unwrap();
        let shape = StarShape::circle(1.0, 4).unwrap();
        assert!(radial_l2_error(&truth, &shape) < 1e-12);
        assert!(hausdorff_distance(&truth, &shape) < 1e-3);
    }

    #[test]
    fn hausdorff_sees_a_radial_bump() {
        let truth = make_named_shape("circle", 256).unwrap();
        let mut a = vec![0.0; 4];
        a[0] = 1.0;
        a[3] = 0.1;
        let shape = StarShape::new(a, vec![0.0; 3]).unwrap();
        let hd = hausdorff_distance(&truth, &shape);
        assert!((hd - 0.1).abs() < 5e-3, "hd {hd}");
    }

    #[test]
    fn empty_dataset_is_a_validation_error() {
        let cfg = tiny_config();
        let manifest = DatasetManifest {
            version: SCHEMA_VERSION,
            config: cfg,
            truth_sources: vec![],
            truth_radial: vec![],
            truth_polyline: vec![],
            records: vec![],
        };
        assert!(matches!(
            run_locate(&manifest, &[], None),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            run_coinvert(&manifest, &[], None),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn illumination_split_only_applies_to_arcs() {
        let full = ExperimentConfig::default();
        let shape = StarShape::circle(1.0, 3).unwrap();
        let radial = vec![1.0; 16];
        assert!(illumination_split(&full, &radial, &shape).is_none());
        let arc = ExperimentConfig {
            sources: SourceConfig::Ring {
                count: 4,
                radius: 3.0,
                start_angle: 0.0,
                span: PI / 2.0,
                polarization_angle: 0.0,
            },
            ..ExperimentConfig::default()
        };
        let split = illumination_split(&arc, &radial, &shape).unwrap();
        assert!(split.illuminated_rms.abs() < 1e-12);
        assert!(split.shadow_rms.abs() < 1e-12);
    }
}
