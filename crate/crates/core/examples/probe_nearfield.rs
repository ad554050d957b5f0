//! Scratch probe: near-field fidelity of the fitted ansatz. Compares the
//! represented scattered field against the true one on circles approaching
//! the obstacle boundary, and the total-field defect on the true boundary.

use coelast_core::forward::{solve_rigid_scattering, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring};
use coelast_core::kernels::{self, CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{assemble, eval_field, tikhonov_solve};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let aux = ring(0.7, 100).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();

    let obstacle = make_named_shape("circle", 256).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let params = ForwardSolverParams::default();
    let sol = solve_rigid_scattering(&med, &obstacle, &src, &params).unwrap();
    let v: Vec<CVec2> = recv
        .points()
        .iter()
        .map(|&x| sol.scattered_at(x).unwrap())
        .collect();

    let pc = {
        let p = src.polarization();
        CVec2::new(Complex64::from(p.x), Complex64::from(p.y))
    };

    for xi in [1e-2, 1e-4, 1e-6, 1e-8] {
        let den = tikhonov_solve(&sys, &v, xi).unwrap();
        println!("xi {xi:.0e} (far-field misfit {:.2e}):", den.relative_residual());
        for radius in [3.0, 2.0, 1.5, 1.2, 1.0] {
            let mut err = 0.0f64;
            let mut scale = 0.0f64;
            let mut total = 0.0f64;
            let mut inc = 0.0f64;
            for k in 0..64 {
                let t = 2.0 * PI * (k as f64 + 0.5) / 64.0;
                let x = Point::new(radius * t.cos(), radius * t.sin());
                let vt = sol.scattered_at(x).unwrap();
                let va = eval_field(&sys, &den, x).unwrap();
                err = err.max((vt - va).norm());
                scale = scale.max(vt.norm());
                let ui = kernels::green(&med, x, src.location()).unwrap() * pc;
                total = total.max((ui + va).norm());
                inc = inc.max(ui.norm());
            }
            println!(
                "  r {radius:.1}: |v_fit - v_true| {err:.3e} (|v| {scale:.3e})  |u_inc + v_fit| {total:.3e} (|u_inc| {inc:.3e})"
            );
        }
    }
}
