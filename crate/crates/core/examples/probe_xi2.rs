//! Scratch probe: regularization sweep on the reference configurations,
//! tracking receiver misfit, true-boundary defect, and final shape error.

use coelast_core::forward::{solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, radial_profile, ring, StarShape};
use coelast_core::kernels::{ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{
    fit_densities, newton_step, total_with_grad, NewtonOptions, NewtonState,
};
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

fn radial_err(name: &str, shape: &StarShape) -> f64 {
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
    (num / den).sqrt()
}

fn hausdorff(name: &str, shape: &StarShape) -> f64 {
    let truth_curve = make_named_shape(name, 256).unwrap();
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
    one_way(&a, &b).max(one_way(&b, &a))
}

fn sweep(name: &str, omega: f64, n_src: usize, pol: f64) {
    let med = ElasticMedium::new(1.0, 1.0, omega).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let sources: Vec<SourceSpec> = (0..n_src)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n_src as f64;
            SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), pol)
        })
        .collect();
    let recs = scattered_records(&med, name, &sources, &recv);
    let truth = make_named_shape(name, 256).unwrap();

    for xi in [1e-5, 1e-6, 1e-7, 1e-8, 1e-10] {
        let opts = NewtonOptions { xi, ..NewtonOptions::default() };
        let (system, densities) = fit_densities(&med, &recs, &opts).unwrap();
        let misfit = densities
            .iter()
            .map(|d| d.relative_residual())
            .fold(0.0f64, f64::max);
        let mut defect = 0.0f64;
        for (den, src) in densities.iter().zip(&sources) {
            for j in 0..128 {
                let x = truth.point(2.0 * PI * j as f64 / 128.0);
                let (u, _) = total_with_grad(&system, den, src, x).unwrap();
                defect = defect.max(u.norm());
            }
        }
        let mut state = NewtonState::start(StarShape::circle(1.0, 8).unwrap());
        let mut iters = 0;
        for _ in 0..opts.max_iter {
            state = newton_step(&system, &densities, &sources, &state, &opts).unwrap();
            iters += 1;
            if state.update_error < opts.tol {
                break;
            }
        }
        println!(
            "{name} w{omega} {n_src}src xi {xi:.0e}: misfit {misfit:.2e} bdy_defect {defect:.2e} iters {iters} radial {:.3e} hausdorff {:.3e}",
            radial_err(name, &state.shape),
            hausdorff(name, &state.shape)
        );
    }
}

fn main() {
    sweep("3-leaf", 8.0, 12, PI / 3.0);
    sweep("kite", 6.0, 12, PI / 3.0);
    sweep("kite", 6.0, 8, PI / 5.0);
}
