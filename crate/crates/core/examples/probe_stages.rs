//! Scratch probe: isolate where reconstruction quality is lost.
//! Stage 1: per-source defect of the fitted total field on the true boundary.
//! Stage 2: Newton iterations started from the exact truth shape.
//! Stage 3: Newton iterations started from the unit circle, with radius stats.

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

fn stats(shape: &StarShape) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..256 {
        let r = shape.radius(2.0 * PI * i as f64 / 256.0);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

fn main() {
    let omega = 8.0;
    let med = ElasticMedium::new(1.0, 1.0, omega).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let sources: Vec<SourceSpec> = (0..12)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 12.0;
            SourceSpec::from_angle(Point::new(3.0 * a.cos(), 3.0 * a.sin()), PI / 3.0)
        })
        .collect();
    let recs = scattered_records(&med, "3-leaf", &sources, &recv);

    let xi = 2e-5;
    let opts = NewtonOptions { xi, ..NewtonOptions::default() };
    let (system, densities) = fit_densities(&med, &recs, &opts).unwrap();

    // stage 1: total-field defect on the true boundary, per source
    let truth = make_named_shape("3-leaf", 256).unwrap();
    println!("stage 1: per-source sup |u_fit| on true boundary (xi {xi:.0e})");
    for (k, (den, src)) in densities.iter().zip(&sources).enumerate() {
        let mut defect = 0.0f64;
        let mut scale = 0.0f64;
        for j in 0..128 {
            let x = truth.point(2.0 * PI * j as f64 / 128.0);
            let (u, _) = total_with_grad(&system, den, src, x).unwrap();
            defect = defect.max(u.norm());
            let ui = coelast_core::forward::incident_field(&med, src, x).unwrap();
            scale = scale.max(ui.norm());
        }
        println!("  src {k}: defect {defect:.3e}  |u_inc| {scale:.3e}  fit misfit {:.2e}", den.relative_residual());
    }

    // truth shape as a degree-8 Fourier curve: r = 1 + 0.2 cos 3t
    let mut a = vec![0.0; 9];
    a[0] = 1.0;
    a[3] = 0.2;
    let truth_shape = StarShape::new(a, vec![0.0; 8]).unwrap();

    for (label, start) in [
        ("stage 2: from truth", truth_shape.clone()),
        ("stage 3: from unit circle", StarShape::circle(1.0, 8).unwrap()),
    ] {
        println!("{label}");
        let mut state = NewtonState::start(start);
        for _ in 0..25 {
            state = newton_step(&system, &densities, &sources, &state, &opts).unwrap();
            let (lo, hi) = stats(&state.shape);
            println!(
                "  it {:2} E {:.2e} r [{lo:.3} {hi:.3}] radial_err {:.3e}",
                state.iteration,
                state.update_error,
                radial_err("3-leaf", &state.shape)
            );
            if state.update_error < opts.tol {
                break;
            }
        }
    }
}
