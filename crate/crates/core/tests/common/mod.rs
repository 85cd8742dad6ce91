#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use scatter_core::kernel::green_at_distance;
use scatter_core::lattice::{distance, NodeGrid};
use scatter_core::material::{h_from_target_n, MaterialSpec, SPHERE_SHAPE_CONSTANT};
use scatter_core::Complex64;

/// Wave number `2πf/v` for f = 1000 Hz, v = 34400 cm/s.
pub const REFERENCE_K: f64 = 2.0 * PI * 1000.0 / 34400.0;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Reference physics: unit cube, spheres, κ = 0.5, N = 1, n0 = 1, target
/// n = −1 + 0.001i, incidence along x.
pub fn reference_spec() -> MaterialSpec {
    let mut spec = MaterialSpec {
        wave_number: REFERENCE_K,
        shape_constant: SPHERE_SHAPE_CONSTANT,
        kappa: 0.5,
        density: 1.0,
        impedance: c(0.0, 0.0),
        background: c(1.0, 0.0),
        direction: [1.0, 0.0, 0.0],
    };
    spec.impedance = h_from_target_n(c(-1.0, 0.001), &spec).unwrap();
    spec
}

/// `Σ_{m≠j} G(x_j, x_m)·u_m` by the double loop.
pub fn brute_force(nodes: &NodeGrid, k: f64, u: &[Complex64]) -> Vec<Complex64> {
    let pos: Vec<_> = nodes.positions().collect();
    pos.iter()
        .enumerate()
        .map(|(j, xj)| {
            pos.iter()
                .zip(u)
                .enumerate()
                .filter(|(m, _)| *m != j)
                .map(|(_, (xm, um))| green_at_distance(distance(xj, xm), k) * um)
                .sum()
        })
        .collect()
}

/// `I + c·G` with zero diagonal in `G`, assembled entry by entry.
pub fn dense_system(nodes: &NodeGrid, coupling: Complex64, k: f64) -> DMatrix<Complex64> {
    let pos: Vec<_> = nodes.positions().collect();
    let n = pos.len();
    DMatrix::from_fn(n, n, |j, m| {
        if j == m {
            c(1.0, 0.0)
        } else {
            coupling * green_at_distance(distance(&pos[j], &pos[m]), k)
        }
    })
}

pub fn lu_solve(a: DMatrix<Complex64>, b: &[Complex64]) -> Vec<Complex64> {
    a.lu()
        .solve(&DVector::from_column_slice(b))
        .expect("nonsingular")
        .iter()
        .copied()
        .collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_component_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.re - y.re).abs().max((x.im - y.im).abs()))
        .fold(0.0, f64::max)
}

pub fn rel_error(approx: &[Complex64], exact: &[Complex64]) -> f64 {
    let num: f64 = approx.iter().zip(exact).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = exact.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
