//! Scratch probe: per-iteration radius evolution of the circle
//! reconstruction, across regularization, damping, and Fourier degree.

use coelast_core::forward::{solve_rigid_scattering, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring, StarShape};
use coelast_core::kernels::{CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{assemble, newton_step, tikhonov_solve, NewtonOptions, NewtonState};
use std::f64::consts::PI;

fn radius_stats(shape: &StarShape) -> (f64, f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut mean = 0.0;
    for k in 0..256 {
        let r = shape.radius(2.0 * PI * k as f64 / 256.0);
        lo = lo.min(r);
        hi = hi.max(r);
        mean += r / 256.0;
    }
    (lo, mean, hi)
}

fn main() {
    let med = ElasticMedium::new(1.0, 1.0, 6.0).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let obstacle = make_named_shape("circle", 256).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let params = ForwardSolverParams::default();
    let sol = solve_rigid_scattering(&med, &obstacle, &src, &params).unwrap();
    let v: Vec<CVec2> = recv
        .points()
        .iter()
        .map(|&x| sol.scattered_at(x).unwrap())
        .collect();
    let aux = ring(0.7, 100).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();

    for (xi, cutoff, degree) in [
        (1e-8, 1e-1, 8),
        (1e-8, 3e-2, 8),
        (1e-8, 1e-2, 8),
        (1e-8, 1e-3, 8),
        (1e-6, 1e-2, 8),
        (1e-4, 1e-2, 8),
    ] {
        let den = tikhonov_solve(&sys, &v, xi).unwrap();
        let opts = NewtonOptions {
            xi,
            step_cutoff: cutoff,
            fourier_degree: degree,
            ..NewtonOptions::default()
        };
        println!("xi {xi:.0e} cutoff {cutoff:.0e} M {degree}:");
        let mut state = NewtonState::start(StarShape::circle(1.3, degree).unwrap());
        for it in 0..40 {
            match newton_step(&sys, std::slice::from_ref(&den), &[src], &state, &opts) {
                Ok(s) => state = s,
                Err(e) => {
                    println!("  iter {it}: ERROR {e}");
                    break;
                }
            }
            let (lo, mean, hi) = radius_stats(&state.shape);
            if it < 12 || it % 10 == 0 {
                println!(
                    "  iter {:2}: E {:.3e}  r [{lo:.3} {mean:.3} {hi:.3}]",
                    it + 1,
                    state.update_error
                );
            }
            if state.update_error < 1e-3 {
                println!(
                    "  converged at iter {}: r [{lo:.3} {mean:.3} {hi:.3}]",
                    it + 1
                );
                break;
            }
        }
    }
}
