//! Scratch probe: finer sweep near the promising corners.

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

fn main() {
    let recv = ring(10.0, 120).unwrap();
    let sources: Vec<SourceSpec> = (0..12)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 12.0;
            SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), PI / 3.0)
        })
        .collect();

    let med8 = ElasticMedium::new(1.0, 1.0, 8.0).unwrap();
    let leaf = scattered_records(&med8, "3-leaf", &sources, &recv);
    for xi in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3] {
        let opts = NewtonOptions { xi, collocation: 128, ..NewtonOptions::default() };
        let init = StarShape::circle(1.0, 8).unwrap();
        match reconstruct(&med8, &leaf, &sources, &init, &opts) {
            Ok(st) => println!(
                "3-leaf xi {xi:.0e}: conv {} it {} radial {:.3e}",
                st.converged, st.iteration, radial_err("3-leaf", &st.shape)
            ),
            Err(e) => println!("3-leaf xi {xi:.0e}: ERR {e}"),
        }
    }

    let med6 = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let kite = scattered_records(&med6, "kite", &sources, &recv);
    for xi in [1e-2, 3e-3, 1e-3, 3e-4, 1e-4] {
        for aux in [0.85, 0.9, 0.95] {
            for m in [8usize, 12] {
                let opts = NewtonOptions {
                    xi,
                    aux_radius: aux,
                    fourier_degree: m,
                    collocation: 128,
                    ..NewtonOptions::default()
                };
                let init = StarShape::circle(1.0, m).unwrap();
                match reconstruct(&med6, &kite, &sources, &init, &opts) {
                    Ok(st) => println!(
                        "kite xi {xi:.0e} aux {aux} M {m}: conv {} it {} radial {:.3e} hausdorff {:.3e}",
                        st.converged,
                        st.iteration,
                        radial_err("kite", &st.shape),
                        hausdorff("kite", &st.shape)
                    ),
                    Err(e) => println!("kite xi {xi:.0e} aux {aux} M {m}: ERR {e}"),
                }
            }
        }
    }
}
