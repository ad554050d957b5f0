//! Scratch probe: Newton convergence and shape error as a function of the
//! regularization parameter, on exact scattered data.

use coelast_core::forward::{solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, radial_profile, ring, StarShape};
use coelast_core::kernels::{ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{reconstruct, NewtonOptions};
use std::f64::consts::PI;

fn scattered_records(
    med: &ElasticMedium,
    name: &str,
    sources: &[SourceSpec],
    recv: &coelast_core::ParamCurve,
) -> Vec<FieldRecord> {
    let obstacle = make_named_shape(name, 256).unwrap();
    let params = ForwardSolverParams::default();
    sources
        .iter()
        .map(|src| {
            let sol = solve_rigid_scattering(med, &obstacle, src, &params).unwrap();
            FieldRecord {
                source: *src,
                kind: FieldKind::Scattered,
                solver_residual: Some(sol.residual_rel),
                receivers: recv.clone(),
                values: recv
                    .points()
                    .iter()
                    .map(|&x| sol.scattered_at(x).unwrap())
                    .collect(),
            }
        })
        .collect()
}

fn radial_err(truth: &[f64], shape: &StarShape) -> f64 {
    let n = truth.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, &r) in truth.iter().enumerate() {
        let t = 2.0 * PI * k as f64 / n as f64;
        let d = shape.radius(t) - r;
        num += d * d;
        den += r * r;
    }
    (num / den).sqrt()
}

fn main() {
    let recv = ring(10.0, 120).unwrap();

    // circle, single source, initial radius 1.3
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let recs = scattered_records(&med, "circle", &[src], &recv);
    let truth = radial_profile(&make_named_shape("circle", 256).unwrap(), 512);
    for xi in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7] {
        let opts = NewtonOptions { xi, ..NewtonOptions::default() };
        let initial = StarShape::circle(1.3, 8).unwrap();
        match reconstruct(&med, &recs, &[src], &initial, &opts) {
            Ok(state) => {
                let tail: Vec<String> =
                    state.history.iter().rev().take(3).map(|e| format!("{e:.2e}")).collect();
                println!(
                    "circle xi {xi:.0e}: conv {} iters {} E [{}] radial {:.3e} clamped {}",
                    state.converged,
                    state.iteration,
                    tail.join(" "),
                    radial_err(&truth, &state.shape),
                    state.clamped
                );
            }
            Err(e) => println!("circle xi {xi:.0e}: ERROR {e}"),
        }
    }

    // kite, six sources on the radius-3 ring
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let p = Point::new((PI / 5.0).cos(), (PI / 5.0).sin());
    let sources: Vec<SourceSpec> = (0..6)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 6.0;
            SourceSpec::new(Point::new(3.0 * a.cos(), 3.0 * a.sin()), p).unwrap()
        })
        .collect();
    let recs = scattered_records(&med, "kite", &sources, &recv);
    let truth = radial_profile(&make_named_shape("kite", 256).unwrap(), 512);
    for xi in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7] {
        let opts = NewtonOptions { xi, ..NewtonOptions::default() };
        let initial = StarShape::circle(1.0, 8).unwrap();
        match reconstruct(&med, &recs, &sources, &initial, &opts) {
            Ok(state) => {
                let tail: Vec<String> =
                    state.history.iter().rev().take(3).map(|e| format!("{e:.2e}")).collect();
                println!(
                    "kite xi {xi:.0e}: conv {} iters {} E [{}] radial {:.3e} clamped {}",
                    state.converged,
                    state.iteration,
                    tail.join(" "),
                    radial_err(&truth, &state.shape),
                    state.clamped
                );
            }
            Err(e) => println!("kite xi {xi:.0e}: ERROR {e}"),
        }
    }
}
