//! Scratch probe: pin down the kite-with-8-sources corner and the
//! boundary-residual drop factors for the benchmark configurations.

use coelast_core::forward::{
    add_noise, solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams,
};
use coelast_core::geometry::{make_named_shape, radial_profile, ring, StarShape};
use coelast_core::kernels::{ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{boundary_residual, fit_densities, reconstruct, NewtonOptions};
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

fn ring_sources(count: usize, radius: f64, theta: f64) -> Vec<SourceSpec> {
    (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            SourceSpec::from_angle(Point::new(radius * a.cos(), radius * a.sin()), theta)
        })
        .collect()
}

fn run_case(
    label: &str,
    med: &ElasticMedium,
    name: &str,
    recs: &[FieldRecord],
    sources: &[SourceSpec],
    opts: &NewtonOptions,
    init_r: f64,
) {
    let init = StarShape::circle(init_r, opts.fourier_degree).unwrap();
    let (system, densities) = fit_densities(med, recs, opts).unwrap();
    let res0 = boundary_residual(&system, &densities, sources, &init, 128).unwrap();
    match reconstruct(med, recs, sources, &init, opts) {
        Ok(st) => {
            let res1 = boundary_residual(&system, &densities, sources, &st.shape, 128).unwrap();
            println!(
                "{label}: conv {} it {} radial {:.3e} hausdorff {:.3e} drop {:.1}",
                st.converged,
                st.iteration,
                radial_err(name, &st.shape),
                hausdorff(name, &st.shape),
                res0 / res1
            );
        }
        Err(e) => println!("{label}: ERR {e}"),
    }
}

fn main() {
    let recv = ring(10.0, 120).unwrap();

    // A. kite with 8 sources, exact data, obstacle-only, corner sweep
    {
        let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let sources = ring_sources(8, 3.0, PI / 5.0);
        let recs = scattered_records(&med, "kite", &sources, &recv, None);
        let corners: &[(f64, f64, usize, usize, f64)] = &[
            // xi, aux, M, coll, init_r
            (1e-2, 0.7, 8, 64, 1.0),
            (1e-2, 0.7, 8, 128, 1.0),
            (1e-2, 0.7, 12, 128, 1.0),
            (3e-3, 0.7, 8, 128, 1.0),
            (3e-3, 0.95, 8, 128, 1.0),
            (1e-3, 0.95, 8, 128, 1.0),
            (1e-3, 0.9, 8, 128, 1.0),
            (3e-3, 0.95, 10, 128, 1.0),
            (1e-3, 0.95, 10, 128, 1.0),
            (3e-4, 0.95, 12, 128, 1.0),
            (1e-4, 0.95, 12, 128, 1.0),
            (1e-4, 0.95, 16, 192, 1.0),
            (1e-5, 0.95, 12, 128, 1.0),
            (1e-2, 0.7, 8, 64, 1.3),
            (3e-3, 0.95, 12, 128, 1.3),
            (1e-3, 0.9, 12, 128, 1.3),
        ];
        for &(xi, aux, m, coll, init_r) in corners {
            let opts = NewtonOptions {
                xi,
                aux_radius: aux,
                fourier_degree: m,
                collocation: coll,
                ..NewtonOptions::default()
            };
            run_case(
                &format!("kite8 xi {xi:.0e} aux {aux} M {m} J {coll} r0 {init_r}"),
                &med,
                "kite",
                &recs,
                &sources,
                &opts,
                init_r,
            );
        }
    }

    // B. residual drop in the criterion-3 configurations
    {
        let med = ElasticMedium::new(1.0, 1.0, 8.0).unwrap();
        let sources = ring_sources(12, 3.0, PI / 3.0);
        let recs = scattered_records(&med, "3-leaf", &sources, &recv, None);
        for (xi, coll) in [(1e-2, 128usize), (1e-2, 64)] {
            let opts = NewtonOptions { xi, collocation: coll, ..NewtonOptions::default() };
            run_case(
                &format!("3leaf12 xi {xi:.0e} J {coll}"),
                &med,
                "3-leaf",
                &recs,
                &sources,
                &opts,
                1.0,
            );
        }
        let med6 = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let srck = ring_sources(12, 3.0, PI / 3.0);
        let reck = scattered_records(&med6, "kite", &srck, &recv, None);
        for (xi, aux, m) in [(3e-3, 0.95, 12usize), (1e-3, 0.9, 12)] {
            let opts = NewtonOptions {
                xi,
                aux_radius: aux,
                fourier_degree: m,
                collocation: 128,
                ..NewtonOptions::default()
            };
            run_case(
                &format!("kite12 xi {xi:.0e} aux {aux} M {m}"),
                &med6,
                "kite",
                &reck,
                &srck,
                &opts,
                1.0,
            );
        }
    }

    // C. multi-source circle from a wrong radius (test rewrite candidates)
    {
        let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let sources = ring_sources(6, 3.0, PI / 3.0);
        let recs = scattered_records(&med, "circle", &sources, &recv, None);
        for xi in [1e-2, 1e-3, 1e-4] {
            let opts = NewtonOptions { xi, ..NewtonOptions::default() };
            run_case(
                &format!("circle6 xi {xi:.0e}"),
                &med,
                "circle",
                &recs,
                &sources,
                &opts,
                1.3,
            );
        }
    }

    // D. partial illumination: 4 sources on the left half arc, kite
    {
        let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
        let sources: Vec<SourceSpec> = (0..4)
            .map(|k| {
                let a = PI / 2.0 + PI * k as f64 / 3.0;
                SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), PI / 5.0)
            })
            .collect();
        let recs = scattered_records(&med, "kite", &sources, &recv, Some((0.05, 31)));
        for (xi, aux, m) in [(1e-2, 0.7, 8usize), (3e-3, 0.95, 12)] {
            let opts = NewtonOptions {
                xi,
                aux_radius: aux,
                fourier_degree: m,
                collocation: 128,
                ..NewtonOptions::default()
            };
            let init = StarShape::circle(1.0, m).unwrap();
            match reconstruct(&med, &recs, &sources, &init, &opts) {
                Ok(st) => {
                    // split by angle against the arc midpoint (pi)
                    let truth_curve = make_named_shape("kite", 256).unwrap();
                    let truth = radial_profile(&truth_curve, 512);
                    let (mut lit, mut dark) = ((0.0, 0usize), (0.0, 0usize));
                    for (k, &r) in truth.iter().enumerate() {
                        let t = 2.0 * PI * k as f64 / 512.0;
                        let d = st.shape.radius(t) - r;
                        if (t - PI).cos() >= 0.0 {
                            lit.0 += d * d;
                            lit.1 += 1;
                        } else {
                            dark.0 += d * d;
                            dark.1 += 1;
                        }
                    }
                    println!(
                        "partial xi {xi:.0e} aux {aux} M {m}: conv {} it {} lit {:.3e} dark {:.3e}",
                        st.converged,
                        st.iteration,
                        (lit.0 / lit.1 as f64).sqrt(),
                        (dark.0 / dark.1 as f64).sqrt()
                    );
                }
                Err(e) => println!("partial xi {xi:.0e} aux {aux} M {m}: ERR {e}"),
            }
        }
    }
}
