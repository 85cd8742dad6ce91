//! Krylov solvers for the complex linear systems.
//!
//! [`cocg`] handles complex-symmetric operators (`Aᵀ = A`, not Hermitian) with
//! short recurrences; [`gmres`] handles any operator. Both start from a zero
//! initial guess and recompute `‖b − Ax‖/‖b‖` from scratch before reporting.

mod cocg;
mod gmres;

use std::time::Duration;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use cocg::cocg;
pub use gmres::gmres;

/// Relative residual target used in the reference experiments.
pub const DEFAULT_TOLERANCE: f64 = 2e-5;

/// A square linear operator acting on complex vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A·x`; `x` and `y` both have length [`dim`](Self::dim).
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnOperator { dim, f }
    }
}

impl<F> LinearOperator for FnOperator<F>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        (self.f)(x, y)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(DenseMatrix { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        DenseMatrix { n, entries }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (row, out) in self.entries.chunks(self.n).zip(y.iter_mut()) {
            *out = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Target for `‖b − Ax‖₂ / ‖b‖₂`.
    pub tol: f64,
    pub max_iter: usize,
    /// GMRES cycle length.
    pub restart: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: 1000,
            restart: 30,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions {
            tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::NonPositive {
                what: "tolerance",
                value: self.tol,
            });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidOption("max_iter must be positive".into()));
        }
        if self.restart == 0 {
            return Err(Error::InvalidOption("restart must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<Complex64>,
    pub iterations: usize,
    /// `‖b − Ax‖₂ / ‖b‖₂`, recomputed at exit.
    pub rel_residual: f64,
    pub converged: bool,
    /// The recurrence broke down before reaching the tolerance.
    pub breakdown: bool,
    pub elapsed: Duration,
}

/// Unconjugated bilinear form `Σ uᵢvᵢ`.
pub fn bilinear(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Hermitian inner product `Σ conj(uᵢ)vᵢ`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖b − A·x‖₂ / ‖b‖₂` computed directly (zero `b` gives `‖A·x‖`).
pub fn relative_residual<A: LinearOperator + ?Sized>(op: &A, x: &[Complex64], b: &[Complex64]) -> f64 {
    let r = residual(op, x, b);
    let nb = norm(b);
    let nr = norm(&r);
    if nb == 0.0 {
        nr
    } else {
        nr / nb
    }
}

fn residual<A: LinearOperator + ?Sized>(op: &A, x: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut ax = vec![Complex64::new(0.0, 0.0); b.len()];
    op.apply(x, &mut ax);
    b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

fn check_dims<A: LinearOperator + ?Sized>(op: &A, rhs: &[Complex64], opts: &SolveOptions) -> Result<()> {
    opts.validate()?;
    if op.dim() != rhs.len() {
        return Err(Error::ShapeMismatch {
            expected: op.dim(),
            found: rhs.len(),
        });
    }
    if !all_finite(rhs) {
        return Err(Error::NonFinite(0));
    }
    Ok(())
}
