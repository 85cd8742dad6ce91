mod common;

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use scatter_core::fftconv::{FieldCube, Precision, SpectralEngine};
use scatter_core::kernel::Padding;
use scatter_core::lattice::NodeGrid;
use scatter_core::scattering::{
    ie_system, incident_field, ori_system, red_system, solve, GridSystem,
};
use scatter_core::solvers::{bilinear, cocg, DenseMatrix, LinearOperator, SolveOptions};
use scatter_core::{build_lattice, Complex64, Formulation, LatticeSize, ScatteringConfig};

fn random_field(rng: &mut StdRng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn grid(b: usize) -> NodeGrid {
    NodeGrid {
        side: b,
        spacing: 1.0 / b as f64,
        origin: [0.0; 3],
    }
}

#[test]
fn convolution_matches_double_loop() {
    let mut rng = StdRng::seed_from_u64(2024);
    for b in [2, 3, 4, 5, 8] {
        for padding in [Padding::Exact, Padding::FftFriendly] {
            let k = rng.gen_range(0.0..1.0);
            let nodes = grid(b);
            let u = random_field(&mut rng, nodes.len());
            let engine =
                SpectralEngine::for_grid(b, nodes.spacing, k, padding, Precision::Double).unwrap();
            let fast = engine.convolve(&FieldCube::new(b, u.clone()).unwrap()).unwrap();
            let slow = brute_force(&nodes, k, &u);
            let err = rel_error(fast.values(), &slow);
            assert!(err <= 1e-10, "b={b} {padding:?}: relative error {err:e}");
        }
    }
}

#[test]
fn single_precision_is_close() {
    let mut rng = StdRng::seed_from_u64(7);
    let nodes = grid(6);
    let u = random_field(&mut rng, nodes.len());
    let engine = SpectralEngine::for_grid(6, nodes.spacing, 0.4, Padding::Exact, Precision::Single).unwrap();
    let fast = engine.convolve(&FieldCube::new(6, u.clone()).unwrap()).unwrap();
    assert!(rel_error(fast.values(), &brute_force(&nodes, 0.4, &u)) < 1e-5);
}

#[test]
fn convolution_is_linear() {
    let mut rng = StdRng::seed_from_u64(3);
    let b = 7;
    let engine = SpectralEngine::for_grid(b, 0.1, 0.6, Padding::Exact, Precision::Double).unwrap();
    let u = random_field(&mut rng, b * b * b);
    let v = random_field(&mut rng, b * b * b);
    let (alpha, beta) = (c(0.3, -1.2), c(-2.0, 0.5));
    let mix: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| alpha * x + beta * y).collect();
    let conv = |x: &[Complex64]| {
        let mut out = vec![c(0.0, 0.0); x.len()];
        engine.convolve_into(x, &mut out);
        out
    };
    let (cu, cv, cm) = (conv(&u), conv(&v), conv(&mix));
    let combined: Vec<Complex64> = cu.iter().zip(&cv).map(|(x, y)| alpha * x + beta * y).collect();
    assert!(rel_error(&cm, &combined) < 1e-13);
}

#[test]
fn implicit_matrix_is_complex_symmetric() {
    let mut rng = StdRng::seed_from_u64(11);
    for b in 2..=5 {
        let engine = SpectralEngine::for_grid(b, 0.2, 0.9, Padding::Exact, Precision::Double).unwrap();
        let n = b * b * b;
        let u = random_field(&mut rng, n);
        let v = random_field(&mut rng, n);
        let (mut gu, mut gv) = (vec![c(0.0, 0.0); n], vec![c(0.0, 0.0); n]);
        engine.convolve_into(&u, &mut gu);
        engine.convolve_into(&v, &mut gv);
        let lhs = bilinear(&gu, &v);
        let rhs = bilinear(&u, &gv);
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "b={b}");
    }
}

fn config(b: usize, formulation: Formulation) -> ScatteringConfig {
    let lat = build_lattice(LatticeSize::PerSide(b), 0.5, 1.0).unwrap();
    let mut cfg = ScatteringConfig::new(lat, reference_spec(), formulation);
    cfg.solve = SolveOptions::with_tol(1e-12);
    cfg
}

fn check_against_lu(cfg: &ScatteringConfig, system: &GridSystem) {
    let nodes = *system.nodes();
    let rhs: Vec<Complex64> = nodes.positions().map(|x| incident_field(&cfg.spec, &x)).collect();
    let exact = lu_solve(dense_system(&nodes, system.coupling(), cfg.spec.wave_number), &rhs);
    let sol = solve(cfg).unwrap();
    assert!(sol.report.converged);
    let err = max_component_diff(sol.values(), &exact);
    assert!(err <= 1e-6, "{}: {err:e}", cfg.formulation);
}

#[test]
fn small_systems_match_dense_lu() {
    let ori = config(3, Formulation::Ori);
    check_against_lu(&ori, &ori_system(&ori).unwrap());

    let mut red = config(4, Formulation::Red);
    red.p_side = 2;
    check_against_lu(&red, &red_system(&red).unwrap());

    let mut ie = config(4, Formulation::Ie);
    ie.c_side = 3;
    check_against_lu(&ie, &ie_system(&ie).unwrap());
}

#[test]
fn strongly_coupled_systems_match_dense_lu() {
    for formulation in Formulation::ALL {
        let mut cfg = config(4, formulation);
        cfg.spec.impedance = c(2.0, -3.0);
        cfg.p_side = 2;
        cfg.c_side = 3;
        let system = match formulation {
            Formulation::Ori => ori_system(&cfg),
            Formulation::Red => red_system(&cfg),
            Formulation::Ie => ie_system(&cfg),
        }
        .unwrap();
        check_against_lu(&cfg, &system);
    }
}

#[test]
fn relabeling_particles_keeps_iteration_count() {
    let mut cfg = config(4, Formulation::Ori);
    cfg.spec.impedance = c(1.5, -0.5);
    let system = ori_system(&cfg).unwrap();
    let n = system.dim();
    let a = dense_system(system.nodes(), system.coupling(), cfg.spec.wave_number);
    let rhs: Vec<Complex64> = system
        .nodes()
        .positions()
        .map(|x| incident_field(&cfg.spec, &x))
        .collect();

    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = StdRng::seed_from_u64(99);
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let original = DenseMatrix::from_fn(n, |i, j| a[(i, j)]);
    let permuted = DenseMatrix::from_fn(n, |i, j| a[(perm[i], perm[j])]);
    let prhs: Vec<Complex64> = perm.iter().map(|&p| rhs[p]).collect();

    let opts = SolveOptions::with_tol(1e-8);
    let r1 = cocg(&original, &rhs, &opts).unwrap();
    let r2 = cocg(&permuted, &prhs, &opts).unwrap();
    assert!(r1.converged && r2.converged);
    assert!(r1.iterations > 2);
    assert_eq!(r1.iterations, r2.iterations);
    for (i, &p) in perm.iter().enumerate() {
        assert!((r2.solution[i] - r1.solution[p]).norm() < 1e-7);
    }
}

#[test]
fn scattered_field_is_small_at_reference_physics() {
    let mut cfg = config(20, Formulation::Ori);
    cfg.solve = SolveOptions::default();
    cfg.p_side = 10;
    cfg.c_side = 10;
    for formulation in Formulation::ALL {
        let sol = solve(&cfg.with_formulation(formulation)).unwrap();
        assert!(sol.report.converged);
        assert!(sol.rel_residual() <= 2e-5);
        for (x, u) in sol.sample(&Default::default()) {
            let scattered = (u - incident_field(&cfg.spec, &x)).norm();
            assert!(scattered <= 0.01, "{formulation} at {x:?}: {scattered}");
        }
    }
}
