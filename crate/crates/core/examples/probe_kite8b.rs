//! Scratch probe: rescue attempts for the kite-with-8-sources budget.
//! Knobs: polarization (global angle, per-source), source count ladder,
//! ring radius, start offset, two-stage continuation. Plus a per-angle
//! error profile to localize the failure.

use coelast_core::forward::{
    solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams,
};
use coelast_core::geometry::{make_named_shape, radial_profile, ring, StarShape};
use coelast_core::kernels::{ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{
    boundary_residual, fit_densities, reconstruct, NewtonOptions,
};
use std::f64::consts::PI;

fn pad_to_degree(shape: &StarShape, m: usize) -> StarShape {
    let c = shape.flat();
    let m0 = shape.degree();
    let mut a = vec![0.0; m + 1];
    let mut b = vec![0.0; m];
    a[..m0 + 1].copy_from_slice(&c[..m0 + 1]);
    b[..m0].copy_from_slice(&c[m0 + 1..]);
    StarShape::new(a, b).unwrap()
}

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

fn metrics(shape: &StarShape) -> (f64, f64) {
    let truth_curve = make_named_shape("kite", 256).unwrap();
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

fn profile_line(shape: &StarShape) -> String {
    let truth_curve = make_named_shape("kite", 256).unwrap();
    let truth = radial_profile(&truth_curve, 24);
    (0..24)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 24.0;
            format!("{:+.2}", shape.radius(t) - truth[k])
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn sources_on_ring(angles: &[f64], radius: f64, pol: impl Fn(f64) -> f64) -> Vec<SourceSpec> {
    angles
        .iter()
        .map(|&a| SourceSpec::from_angle(Point::new(radius * a.cos(), radius * a.sin()), pol(a)))
        .collect()
}

fn equi(n: usize, offset: f64) -> Vec<f64> {
    (0..n).map(|k| offset + 2.0 * PI * k as f64 / n as f64).collect()
}

fn run(
    label: &str,
    med: &ElasticMedium,
    recs: &[FieldRecord],
    sources: &[SourceSpec],
    opts: &NewtonOptions,
    init: &StarShape,
    show_profile: bool,
) -> Option<StarShape> {
    match reconstruct(med, recs, sources, init, opts) {
        Ok(st) => {
            let (radial, hd) = metrics(&st.shape);
            println!(
                "{label}: conv {} it {} radial {:.3e} hausdorff {:.3e}",
                st.converged, st.iteration, radial, hd
            );
            if show_profile {
                println!("  profile {}", profile_line(&st.shape));
            }
            Some(st.shape)
        }
        Err(e) => {
            println!("{label}: ERR {e}");
            None
        }
    }
}

fn main() {
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let base = NewtonOptions {
        xi: 1e-3,
        aux_radius: 0.95,
        fourier_degree: 8,
        collocation: 128,
        ..NewtonOptions::default()
    };

    // A. where does the error sit (best corner so far)
    {
        let sources = sources_on_ring(&equi(8, 0.0), 3.0, |_| PI / 5.0);
        let recs = scattered_records(&med, "kite", &sources, &recv);
        let init = StarShape::circle(1.0, 8).unwrap();
        run("A base8 pi/5", &med, &recs, &sources, &base, &init, true);
    }

    // B. polarization variants, 8 sources
    {
        let cases: Vec<(String, Box<dyn Fn(f64) -> f64>)> = vec![
            ("pol pi/3".into(), Box::new(|_| PI / 3.0)),
            ("pol pi/2".into(), Box::new(|_| PI / 2.0)),
            ("pol 0".into(), Box::new(|_| 0.0)),
            ("pol tangential".into(), Box::new(|a| a + PI / 2.0)),
            ("pol radial+45".into(), Box::new(|a| a + PI / 4.0)),
        ];
        for (name, pol) in cases {
            let sources = sources_on_ring(&equi(8, 0.0), 3.0, pol);
            let recs = scattered_records(&med, "kite", &sources, &recv);
            let init = StarShape::circle(1.0, 8).unwrap();
            run(&format!("B 8src {name}"), &med, &recs, &sources, &base, &init, false);
        }
        // start offset
        let sources = sources_on_ring(&equi(8, PI / 8.0), 3.0, |_| PI / 5.0);
        let recs = scattered_records(&med, "kite", &sources, &recv);
        let init = StarShape::circle(1.0, 8).unwrap();
        run("B 8src offset pi/8", &med, &recs, &sources, &base, &init, false);
    }

    // C. count ladder at the kite12 winner corner
    {
        let opts = NewtonOptions {
            xi: 3e-3,
            aux_radius: 0.95,
            fourier_degree: 12,
            collocation: 128,
            ..NewtonOptions::default()
        };
        for n in [9usize, 10, 11, 12] {
            let sources = sources_on_ring(&equi(n, 0.0), 3.0, |_| PI / 3.0);
            let recs = scattered_records(&med, "kite", &sources, &recv);
            let init = StarShape::circle(1.0, 12).unwrap();
            run(&format!("C {n}src pi/3 corner12"), &med, &recs, &sources, &opts, &init, false);
        }
        // 8 sources at that corner with pi/3
        let sources = sources_on_ring(&equi(8, 0.0), 3.0, |_| PI / 3.0);
        let recs = scattered_records(&med, "kite", &sources, &recv);
        let init = StarShape::circle(1.0, 12).unwrap();
        run("C 8src pi/3 corner12", &med, &recs, &sources, &opts, &init, false);
    }

    // D. ring radius variants, 8 sources
    {
        for r in [2.0, 2.5, 4.0] {
            let sources = sources_on_ring(&equi(8, 0.0), r, |_| PI / 5.0);
            let recs = scattered_records(&med, "kite", &sources, &recv);
            let init = StarShape::circle(1.0, 8).unwrap();
            run(&format!("D 8src radius {r}"), &med, &recs, &sources, &base, &init, false);
        }
    }

    // E. two-stage continuation, 8 sources
    {
        let sources = sources_on_ring(&equi(8, 0.0), 3.0, |_| PI / 5.0);
        let recs = scattered_records(&med, "kite", &sources, &recv);
        let stage1 = NewtonOptions {
            xi: 1e-2,
            aux_radius: 0.7,
            fourier_degree: 8,
            collocation: 64,
            ..NewtonOptions::default()
        };
        let init = StarShape::circle(1.0, 8).unwrap();
        if let Some(s1) = run("E stage1 (1e-2,0.7,8)", &med, &recs, &sources, &stage1, &init, false)
        {
            let stage2 = NewtonOptions {
                xi: 1e-3,
                aux_radius: 0.95,
                fourier_degree: 12,
                collocation: 128,
                ..NewtonOptions::default()
            };
            let init2 = pad_to_degree(&s1, 12);
            run("E stage2 (1e-3,0.95,12)", &med, &recs, &sources, &stage2, &init2, true);
        }
        let s1b = NewtonOptions {
            xi: 3e-3,
            aux_radius: 0.95,
            fourier_degree: 8,
            collocation: 128,
            ..NewtonOptions::default()
        };
        let init = StarShape::circle(1.0, 8).unwrap();
        if let Some(s1) = run("E stage1b (3e-3,0.95,8)", &med, &recs, &sources, &s1b, &init, false)
        {
            let stage2 = NewtonOptions {
                xi: 3e-4,
                aux_radius: 0.95,
                fourier_degree: 12,
                collocation: 128,
                ..NewtonOptions::default()
            };
            let init2 = pad_to_degree(&s1, 12);
            run("E stage2b (3e-4,0.95,12)", &med, &recs, &sources, &stage2, &init2, false);
        }
    }

    // F. boundary-defect drop (max norm) vs xi on well-resolved configs
    {
        let med8 = ElasticMedium::new(1.0, 1.0, 8.0).unwrap();
        let sources = sources_on_ring(&equi(12, 0.0), 3.0, |_| PI / 3.0);
        let recs = scattered_records(&med8, "3-leaf", &sources, &recv);
        for xi in [1e-2, 1e-3, 1e-4, 1e-6, 1e-8] {
            let opts = NewtonOptions { xi, ..NewtonOptions::default() };
            let init = StarShape::circle(1.0, 8).unwrap();
            if let Ok(st) = reconstruct(&med8, &recs, &sources, &init, &opts) {
                let (sys, dens) = fit_densities(&med8, &recs, &opts).unwrap();
                let r0 = boundary_residual(&sys, &dens, &sources, &init, 128).unwrap();
                let r1 = boundary_residual(&sys, &dens, &sources, &st.shape, 128).unwrap();
                let (radial, _) = {
                    let truth_curve = make_named_shape("3-leaf", 256).unwrap();
                    let truth = radial_profile(&truth_curve, 512);
                    let mut num = 0.0;
                    let mut den = 0.0;
                    for (k, &r) in truth.iter().enumerate() {
                        let t = 2.0 * PI * k as f64 / 512.0;
                        let d = st.shape.radius(t) - r;
                        num += d * d;
                        den += r * r;
                    }
                    ((num / den).sqrt(), 0.0)
                };
                println!(
                    "F 3leaf12 xi {xi:.0e}: conv {} it {} radial {:.3e} res0 {:.3e} res1 {:.3e} drop {:.1}",
                    st.converged, st.iteration, radial, r0, r1, r0 / r1
                );
            }
        }
        // kite12 winner corner at smaller xi
        let srcs12 = sources_on_ring(&equi(12, 0.0), 3.0, |_| PI / 3.0);
        let recs12 = scattered_records(&med, "kite", &srcs12, &recv);
        for xi in [1e-3, 3e-4, 1e-4] {
            let opts = NewtonOptions {
                xi,
                aux_radius: 0.95,
                fourier_degree: 12,
                collocation: 128,
                ..NewtonOptions::default()
            };
            let init = StarShape::circle(1.0, 12).unwrap();
            if let Ok(st) = reconstruct(&med, &recs12, &srcs12, &init, &opts) {
                let (sys, dens) = fit_densities(&med, &recs12, &opts).unwrap();
                let r0 = boundary_residual(&sys, &dens, &srcs12, &init, 128).unwrap();
                let r1 = boundary_residual(&sys, &dens, &srcs12, &st.shape, 128).unwrap();
                let (radial, hd) = metrics(&st.shape);
                println!(
                    "F kite12 xi {xi:.0e}: conv {} it {} radial {:.3e} hd {:.3e} drop {:.1}",
                    st.converged, st.iteration, radial, hd, r0 / r1
                );
            }
        }
    }
}
