//! Scratch probe: reconstruction quality on the reference configurations
//! (multi-source rings, unit-circle initial guess) and on in-basin
//! single-source circle cases.

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

fn metrics(name: &str, shape: &StarShape) -> (f64, f64) {
    let truth_curve = make_named_shape(name, 256).unwrap();
    let truth = radial_profile(&truth_curve, 512);
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, &r) in truth.iter().enumerate() {
        let t = 2.0 * PI * k as f64 / 512.0;
        let d = shape.radius(t) - r;
        num += d * d;
        den += r * r;
    }
    let radial = (num / den).sqrt();

    // symmetric Hausdorff on 512-point polylines
    let a: Vec<Point> = (0..512)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 512.0;
            Point::new(shape.radius(t) * t.cos(), shape.radius(t) * t.sin())
        })
        .collect();
    let b: Vec<Point> = (0..512)
        .map(|k| truth_curve.point(2.0 * PI * k as f64 / 512.0))
        .collect();
    let one_way = |p: &[Point], q: &[Point]| -> f64 {
        p.iter()
            .map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    (radial, one_way(&a, &b).max(one_way(&b, &a)))
}

fn ring_sources(count: usize, radius: f64, pol_angle: f64) -> Vec<SourceSpec> {
    (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            SourceSpec::from_angle(Point::new(radius * a.cos(), radius * a.sin()), pol_angle)
        })
        .collect()
}

fn run(
    label: &str,
    name: &str,
    omega: f64,
    sources: &[SourceSpec],
    initial: StarShape,
    opts: &NewtonOptions,
) {
    let med = ElasticMedium::new(1.0, 1.0, omega).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let recs = scattered_records(&med, name, sources, &recv);
    match reconstruct(&med, &recs, sources, &initial, opts) {
        Ok(state) => {
            let (radial, hd) = metrics(name, &state.shape);
            println!(
                "{label}: conv {} iters {} E_end {:.2e} radial {:.3e} hausdorff {:.3e} clamped {}",
                state.converged,
                state.iteration,
                state.update_error,
                radial,
                hd,
                state.clamped
            );
        }
        Err(e) => println!("{label}: ERROR {e}"),
    }
}

fn main() {
    let single = [SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap()];

    // in-basin single-source circle cases
    for (omega, r0, xi) in [(3.0, 1.3, 1e-6), (3.0, 1.3, 1e-8), (6.0, 1.15, 1e-8)] {
        let opts = NewtonOptions { xi, ..NewtonOptions::default() };
        run(
            &format!("circle w{omega} r0 {r0} xi {xi:.0e}"),
            "circle",
            omega,
            &single,
            StarShape::circle(r0, 8).unwrap(),
            &opts,
        );
    }

    // reference multi-source configs from the unit circle
    let p3 = PI / 3.0;
    for xi in [1e-6, 1e-8] {
        let opts = NewtonOptions { xi, ..NewtonOptions::default() };
        run(
            &format!("3-leaf w8 12src xi {xi:.0e}"),
            "3-leaf",
            8.0,
            &ring_sources(12, 3.0, p3),
            StarShape::circle(1.0, 8).unwrap(),
            &opts,
        );
        run(
            &format!("kite w6 12src xi {xi:.0e}"),
            "kite",
            6.0,
            &ring_sources(12, 3.0, p3),
            StarShape::circle(1.0, 8).unwrap(),
            &opts,
        );
        run(
            &format!("kite w6 8src xi {xi:.0e}"),
            "kite",
            6.0,
            &ring_sources(8, 3.0, PI / 5.0),
            StarShape::circle(1.0, 8).unwrap(),
            &opts,
        );
    }
}
