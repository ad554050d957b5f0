//! Shape reconstruction on simulated data: gradient oracle, representation
//! fidelity of the regularized ansatz, and Newton convergence on a circle.

mod common;

use coelast_core::forward::{solve_rigid_scattering, FieldKind, FieldRecord, ForwardSolverParams};
use coelast_core::geometry::{make_named_shape, ring, StarShape};
use coelast_core::kernels::{CVec2, ElasticMedium, Point, SourceSpec};
use coelast_core::shaperec::{
    assemble, boundary_residual, eval_field, eval_grad, reconstruct, tikhonov_solve,
    DensitySolution, NewtonOptions,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn medium(omega: f64) -> ElasticMedium {
    ElasticMedium::new(1.0, 1.0, omega).unwrap()
}

/// Exact scattered-field record computed directly from the forward solution.
fn scattered_record(
    med: &ElasticMedium,
    obstacle_name: &str,
    source: SourceSpec,
    receivers: &coelast_core::ParamCurve,
) -> FieldRecord {
    let obstacle = make_named_shape(obstacle_name, 256).unwrap();
    let params = ForwardSolverParams::default();
    let solution = solve_rigid_scattering(med, &obstacle, &source, &params).unwrap();
    let values = receivers
        .points()
        .iter()
        .map(|&x| solution.scattered_at(x).unwrap())
        .collect();
    FieldRecord {
        source,
        kind: FieldKind::Scattered,
        solver_residual: Some(solution.residual_rel),
        receivers: receivers.clone(),
        values,
    }
}

fn random_density(nodes: usize, seed: u64) -> DensitySolution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let densities = (0..nodes)
        .map(|_| {
            CVec2::new(
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    DensitySolution {
        xi: 1e-2,
        densities,
        residual: 0.0,
        data_norm: 0.0,
        source_index: 0,
    }
}

#[test]
fn gradient_matches_finite_differences_on_a_random_cloud() {
    let med = medium(6.0);
    let aux = ring(0.7, 100).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();
    let density = random_density(aux.node_count(), 11);

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = 1e-5;
    let mut checked = 0;
    while checked < 20 {
        let x = Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if (x.norm() - 0.7).abs() < 0.3 {
            continue;
        }
        checked += 1;
        let grad = eval_grad(&sys, &density, x).unwrap();
        let mut scale = 0.0f64;
        let mut err = 0.0f64;
        for j in 0..2 {
            let mut e = Point::new(0.0, 0.0);
            e[j] = h;
            let fp = eval_field(&sys, &density, x + e).unwrap();
            let fm = eval_field(&sys, &density, x - e).unwrap();
            let fd = (fp - fm) / Complex64::from(2.0 * h);
            for i in 0..2 {
                err = err.max((grad[(i, j)] - fd[i]).norm());
                scale = scale.max(grad[(i, j)].norm());
            }
        }
        assert!(err <= 1e-6 * scale, "gradient defect {err} at {x:?} (scale {scale})");
    }
}

#[test]
fn represented_field_satisfies_the_navier_equation() {
    let med = medium(6.0);
    let aux = ring(0.7, 100).unwrap();
    let recv = ring(10.0, 120).unwrap();
    let sys = assemble(&med, &aux, &recv).unwrap();
    let density = random_density(aux.node_count(), 21);
    let field = |x: Point| eval_field(&sys, &density, x).unwrap();
    for x in [
        Point::new(1.5, 0.3),
        Point::new(-0.9, 1.4),
        Point::new(0.0, -2.5),
        Point::new(3.0, 3.0),
    ] {
        let res = common::navier_residual(&med, &field, x, 1e-3);
        assert!(res <= 1e-4, "Navier residual {res:.3e} at {x:?}");
    }
}

/// The layer ansatz on the auxiliary circle can represent exact scattered
/// data to high accuracy once the regularization is relaxed: the receiver
/// misfit falls well below 5% and keeps dropping as xi shrinks. At the
/// working xi = 1e-2 the fit is intentionally biased toward smoothness and
/// its misfit is far larger; the reconstruction relies on the zero set of
/// the smoothed field, not on explaining the data to the last digit.
#[test]
fn ansatz_explains_exact_scattering_data_at_small_regularization() {
    let recv = ring(10.0, 120).unwrap();
    let aux = ring(0.7, 100).unwrap();
    let src = SourceSpec::new(
        Point::new(3.0, 0.0),
        Point::new((PI / 5.0).cos(), (PI / 5.0).sin()),
    )
    .unwrap();

    // kite, omega = 6: misfit floor ~1e-2 at xi = 1e-10
    let med6 = medium(6.0);
    let rec = scattered_record(&med6, "kite", src, &recv);
    let sys = assemble(&med6, &aux, &recv).unwrap();
    let misfit = |xi: f64| tikhonov_solve(&sys, &rec.values, xi).unwrap().relative_residual();
    let coarse = misfit(1e-2);
    let fine = misfit(1e-10);
    assert!(fine <= 0.05, "kite misfit at xi=1e-10 is {fine}");
    assert!(
        fine < 0.5 * coarse,
        "relaxing xi must improve the fit: {coarse} -> {fine}"
    );

    // 3-leaf, omega = 8: floor ~2e-3 at xi = 1e-10
    let med8 = medium(8.0);
    let rec3 = scattered_record(&med8, "3-leaf", src, &recv);
    let sys3 = assemble(&med8, &aux, &recv).unwrap();
    let fit3 = tikhonov_solve(&sys3, &rec3.values, 1e-10).unwrap().relative_residual();
    assert!(fit3 <= 0.01, "3-leaf misfit at xi=1e-10 is {fit3}");
}

#[test]
fn circle_reconstruction_converges_from_a_wrong_radius() {
    let med = medium(6.0);
    let recv = ring(10.0, 120).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let rec = scattered_record(&med, "circle", src, &recv);
    let sources = [src];
    let initial = StarShape::circle(1.3, 8).unwrap();
    let opts = NewtonOptions::default();
    let state = reconstruct(&med, std::slice::from_ref(&rec), &sources, &initial, &opts).unwrap();
    assert!(state.converged, "E history {:?}", state.history);
    assert!(
        state.iteration <= 50,
        "took {} iterations, E history {:?}",
        state.iteration,
        state.history
    );
    assert!(state.update_error < 1e-3);
    // One source fixes the stopping behavior but not the shape; accuracy is
    // exercised by the multi-source runs in the acceptance suite.
    assert!(state.shape.min_radius(256) > 0.0);
}

#[test]
fn loose_tolerance_returns_after_one_step() {
    let med = medium(6.0);
    let recv = ring(10.0, 120).unwrap();
    let src = SourceSpec::new(Point::new(3.0, 0.0), Point::new(0.0, 1.0)).unwrap();
    let rec = scattered_record(&med, "circle", src, &recv);
    let initial = StarShape::circle(1.3, 8).unwrap();
    let opts = NewtonOptions {
        tol: 10.0,
        ..NewtonOptions::default()
    };
    let state = reconstruct(&med, std::slice::from_ref(&rec), &[src], &initial, &opts).unwrap();
    assert!(state.converged);
    assert_eq!(state.iteration, 1);
    assert_eq!(state.history.len(), 1);
}
