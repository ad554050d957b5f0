//! Scratch probe: does the kite's receiver-space misfit collapse as xi -> 0,
//! or is there a genuine representability floor for an origin-centered
//! auxiliary circle?

use coelast_core::forward::{solve_rigid_scattering, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring};
use coelast_core::kernels::{CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{assemble, tikhonov_solve};

fn main() {
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let obstacle = make_named_shape("kite", 256).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let sol = solve_rigid_scattering(&med, &obstacle, &src, &ForwardSolverParams::default()).unwrap();
    println!("forward residual: {:.2e}", sol.residual_rel);
    let v: Vec<CVec2> = recv
        .points()
        .iter()
        .map(|&x| sol.scattered_at(x).unwrap())
        .collect();
    for aux_r in [0.7, 0.9] {
        let aux = ring(aux_r, 100).unwrap();
        let sys = assemble(&med, &aux, &recv).unwrap();
        for xi in [1e-8, 1e-12, 1e-16, 1e-20] {
            let den = tikhonov_solve(&sys, &v, xi).unwrap();
            println!("aux {aux_r} xi {xi:.0e}: misfit {:.3e}", den.relative_residual());
        }
    }
}
