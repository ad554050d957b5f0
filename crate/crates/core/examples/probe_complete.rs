//! Scratch probe: completeness of the layer ansatz. A Green-tensor column
//! with singularity strictly inside the auxiliary curve is a radiating field
//! that the ansatz must reproduce essentially exactly; failure means a kernel
//! bug rather than an ill-posedness artifact.

use coelast_core::forward::{solve_rigid_scattering, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring};
use coelast_core::kernels::{self, CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{assemble, eval_field, tikhonov_solve};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    for omega in [6.0, 8.0] {
        let med = ElasticMedium::new(1.0, 1.0, omega).unwrap();
        let recv = ring(10.0, 120).unwrap();
        let aux = ring(0.7, 100).unwrap();
        let sys = assemble(&med, &aux, &recv).unwrap();

        // target: Green column at z0 = (0.2, -0.1), singular inside the aux disk
        let z0 = Point::new(0.2, -0.1);
        let p = CVec2::new(Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0));
        let v: Vec<CVec2> = recv
            .points()
            .iter()
            .map(|&x| kernels::green(&med, x, z0).unwrap() * p)
            .collect();

        for xi in [1e-6, 1e-10, 1e-14] {
            let den = tikhonov_solve(&sys, &v, xi).unwrap();
            // near-field check on the unit circle
            let mut err = 0.0f64;
            let mut scale = 0.0f64;
            for k in 0..64 {
                let t = 2.0 * PI * (k as f64 + 0.5) / 64.0;
                let x = Point::new(t.cos(), t.sin());
                let vt = kernels::green(&med, x, z0).unwrap() * p;
                let va = eval_field(&sys, &den, x).unwrap();
                err = err.max((vt - va).norm());
                scale = scale.max(vt.norm());
            }
            println!(
                "w{omega} green-column xi {xi:.0e}: far misfit {:.3e}  near err {err:.3e} (scale {scale:.3e})",
                den.relative_residual()
            );
        }
    }

    // same machinery on true circle-scattering data for contrast
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let aux = ring(0.7, 100).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();
    let obstacle = make_named_shape("circle", 256).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let sol = solve_rigid_scattering(&med, &obstacle, &src, &ForwardSolverParams::default()).unwrap();
    let v: Vec<CVec2> = recv
        .points()
        .iter()
        .map(|&x| sol.scattered_at(x).unwrap())
        .collect();
    for xi in [1e-6, 1e-10, 1e-14] {
        let den = tikhonov_solve(&sys, &v, xi).unwrap();
        let mut err = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..64 {
            let t = 2.0 * PI * (k as f64 + 0.5) / 64.0;
            let x = Point::new(1.05 * t.cos(), 1.05 * t.sin());
            let vt = sol.scattered_at(x).unwrap();
            let va = eval_field(&sys, &den, x).unwrap();
            err = err.max((vt - va).norm());
            scale = scale.max(vt.norm());
        }
        println!(
            "w6 circle-scatter xi {xi:.0e}: far misfit {:.3e}  near err(r=1.05) {err:.3e} (scale {scale:.3e})",
            den.relative_residual()
        );
    }
}
