//! Scratch probe: singular-value scale of the ansatz operator and data
//! misfit as a function of the regularization parameter.

use coelast_core::forward::{solve_rigid_scattering, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring};
use coelast_core::kernels::{CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{assemble, tikhonov_solve};
use std::f64::consts::PI;

fn main() {
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let aux = ring(0.7, 100).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();

    let svd = sys.matrix().clone().svd(false, false);
    let smax = svd.singular_values[0];
    let smin = svd.singular_values[svd.singular_values.len() - 1];
    println!("sigma_max {smax:.4e} sigma_min {smin:.4e}");
    for q in [0, 10, 20, 40, 60, 80, 100, 150, 199] {
        println!("  s[{q}] = {:.4e}", svd.singular_values[q]);
    }

    for name in ["circle", "kite"] {
        let obstacle = make_named_shape(name, 256).unwrap();
        let src = SourceSpec::new(
            Point::new(3.0, 0.0),
            Point::new((PI / 5.0).cos(), (PI / 5.0).sin()),
        )
        .unwrap();
        let params = ForwardSolverParams::default();
        let solution = solve_rigid_scattering(&med, &obstacle, &src, &params).unwrap();
        let v: Vec<CVec2> = recv
            .points()
            .iter()
            .map(|&x| solution.scattered_at(x).unwrap())
            .collect();
        println!("{name}: forward residual {:.2e}", solution.residual_rel);
        for xi in [1e-2, 1e-3, 1e-4, 2e-5, 1e-5, 1e-6, 1e-8] {
            let sol = tikhonov_solve(&sys, &v, xi).unwrap();
            let gnorm = sol
                .densities
                .iter()
                .map(|g| g.norm_squared())
                .sum::<f64>()
                .sqrt();
            println!(
                "  xi {xi:.1e}: rel misfit {:.4e}  |g| {:.4e}",
                sol.relative_residual(),
                gnorm
            );
        }
    }
}
