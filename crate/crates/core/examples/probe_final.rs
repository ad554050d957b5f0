//! Scratch probe: remaining open questions before freezing defaults.
//! 1. Kite receiver-misfit floor as xi -> 0 (representability).
//! 2. Single-source circle reconstruction at smoothing-scale xi.
//! 3. Kite with 8 sources, exact and 5% noise, at the good corners.
//! 4. Boundary-residual drop factor for converged runs.

use coelast_core::forward::{
    add_noise, solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams,
};
use coelast_core::geometry::{make_named_shape, radial_profile, ring, StarShape};
use coelast_core::kernels::{CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{
    assemble, boundary_residual, fit_densities, newton_step, reconstruct, tikhonov_solve,
    NewtonOptions, NewtonState,
};
use std::f64::consts::PI;

fn scattered_records(
    med: &ElasticMedium,
    name: &str,
    sources: &[SourceSpec],
    recv: &coelast_core::ParamCurve,
    noise: Option<(f64, u64)>,
) -> Vec<FieldRecord> {
    let obstacle = make_named_shape(name, 256).unwrap();
    let params = ForwardSolverParams::default();
    sources
        .iter()
        .enumerate()
        .map(|(k, src)| {
            let sol = solve_rigid_scattering(med, &obstacle, src, &params).unwrap();
            let mut rec = FieldRecord {
                source: *src,
                kind: FieldKind::Scattered,
                solver_residual: Some(sol.residual_rel),
                receivers: recv.clone(),
                values: recv
                    .points()
                    .iter()
                    .map(|&x| sol.scattered_at(x).unwrap())
                    .collect(),
            };
            if let Some((eps, seed)) = noise {
                rec = add_noise(&rec, eps, seed + k as u64).unwrap();
            }
            rec
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
    // 1. kite misfit floor
    {
        let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let recv = ring(10.0, 120).unwrap();
        let src = [SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap()];
        let recs = scattered_records(&med, "kite", &src, &recv, None);
        let v: Vec<CVec2> = recs[0].values.clone();
        for aux_r in [0.7, 0.95] {
            let aux = ring(aux_r, 100).unwrap();
            let sys = assemble(&med, &aux, &recv).unwrap();
            for xi in [1e-10, 1e-14, 1e-18] {
                let den = tikhonov_solve(&sys, &v, xi).unwrap();
                println!("kite-floor aux {aux_r} xi {xi:.0e}: misfit {:.3e}", den.relative_residual());
            }
        }
        // 3-leaf and circle floors for the fidelity test
        let med8 = ElasticMedium::new(1.0, 1.0, 8.0).unwrap();
        for name in ["circle", "3-leaf"] {
            let m = if name == "circle" { &med } else { &med8 };
            let rl = scattered_records(m, name, &src, &recv, None);
            let aux = ring(0.7, 100).unwrap();
            let sys = assemble(m, &aux, &recv).unwrap();
            for xi in [1e-8, 1e-10] {
                let den = tikhonov_solve(&sys, &rl[0].values, xi).unwrap();
                println!("{name}-floor xi {xi:.0e}: misfit {:.3e}", den.relative_residual());
            }
        }
    }

    // 2. single-source circle at smoothing-scale xi
    for omega in [3.0, 6.0] {
        let med = ElasticMedium::new(1.0, 1.0, omega).unwrap();
        let recv = ring(10.0, 120).unwrap();
        let sources = [SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap()];
        let recs = scattered_records(&med, "circle", &sources, &recv, None);
        for xi in [1e-1, 1e-2, 1e-3] {
            let opts = NewtonOptions { xi, ..NewtonOptions::default() };
            let init = StarShape::circle(1.3, 8).unwrap();
            let (system, densities) = fit_densities(&med, &recs, &opts).unwrap();
            let res0 = boundary_residual(&system, &densities, &sources, &init, 128).unwrap();
            match reconstruct(&med, &recs, &sources, &init, &opts) {
                Ok(st) => {
                    let res1 =
                        boundary_residual(&system, &densities, &sources, &st.shape, 128).unwrap();
                    println!(
                        "circle w{omega} xi {xi:.0e}: conv {} it {} radial {:.3e} res0/res1 {:.1}",
                        st.converged,
                        st.iteration,
                        radial_err("circle", &st.shape),
                        res0 / res1
                    );
                }
                Err(e) => println!("circle w{omega} xi {xi:.0e}: ERR {e}"),
            }
        }
    }

    // 3. kite with 8 sources at the good corners, exact and noisy
    {
        let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let recv = ring(10.0, 120).unwrap();
        let sources: Vec<SourceSpec> = (0..8)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 8.0;
                SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), PI / 5.0)
            })
            .collect();
        for noise in [None, Some((0.05, 11u64))] {
            let recs = scattered_records(&med, "kite", &sources, &recv, noise);
            for (xi, aux, m) in [(3e-3, 0.95, 12usize), (1e-3, 0.9, 12), (1e-2, 0.95, 12)] {
                let opts = NewtonOptions {
                    xi,
                    aux_radius: aux,
                    fourier_degree: m,
                    collocation: 128,
                    ..NewtonOptions::default()
                };
                let init = StarShape::circle(1.0, m).unwrap();
                match reconstruct(&med, &recs, &sources, &init, &opts) {
                    Ok(st) => println!(
                        "kite8 noise {} xi {xi:.0e} aux {aux} M {m}: conv {} it {} radial {:.3e} hausdorff {:.3e}",
                        noise.is_some(),
                        st.converged,
                        st.iteration,
                        radial_err("kite", &st.shape),
                        hausdorff("kite", &st.shape)
                    ),
                    Err(e) => println!(
                        "kite8 noise {} xi {xi:.0e} aux {aux} M {m}: ERR {e}",
                        noise.is_some()
                    ),
                }
            }
        }
    }

    // 4. noisy 3-leaf with 12 sources at the default xi
    {
        let med = ElasticMedium::new(1.0, 1.0, 8.0).unwrap();
        let recv = ring(10.0, 120).unwrap();
        let sources: Vec<SourceSpec> = (0..12)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 12.0;
                SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), PI / 3.0)
            })
            .collect();
        let recs = scattered_records(&med, "3-leaf", &sources, &recv, Some((0.05, 23)));
        for xi in [3e-2, 1e-2] {
            let opts = NewtonOptions { xi, collocation: 128, ..NewtonOptions::default() };
            let init = StarShape::circle(1.0, 8).unwrap();
            match reconstruct(&med, &recs, &sources, &init, &opts) {
                Ok(st) => println!(
                    "3-leaf noisy xi {xi:.0e}: conv {} it {} radial {:.3e}",
                    st.converged,
                    st.iteration,
                    radial_err("3-leaf", &st.shape)
                ),
                Err(e) => println!("3-leaf noisy xi {xi:.0e}: ERR {e}"),
            }
        }
    }
}
