use std::time::Instant;

use num_complex::Complex64;

use super::{
    all_finite, bilinear, check_dims, norm, relative_residual, residual, LinearOperator,
    SolveOptions, SolveReport,
};
use crate::error::{Error, Result};

/// Conjugate Orthogonal Conjugate Gradient for `A·x = b` with `Aᵀ = A`.
///
/// CG with the unconjugated form `⟨u, v⟩ = Σ uᵢvᵢ`:
/// `α = ⟨r, r⟩/⟨p, Ap⟩`, `β = ⟨r₊, r₊⟩/⟨r, r⟩`. When the recurrence residual
/// drops below the tolerance the true residual is recomputed; if it has
/// drifted above the tolerance the iteration restarts from the current `x`.
pub fn cocg<A: LinearOperator + ?Sized>(
    op: &A,
    rhs: &[Complex64],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_dims(op, rhs, opts)?;
    let start = Instant::now();
    let n = rhs.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];

    let rhs_norm = norm(rhs);
    if rhs_norm == 0.0 {
        return Ok(SolveReport {
            solution: x,
            iterations: 0,
            rel_residual: 0.0,
            converged: true,
            breakdown: false,
            elapsed: start.elapsed(),
        });
    }

    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut q = vec![zero; n];
    let mut rho = bilinear(&r, &r);
    let mut iterations = 0;
    let mut converged = false;
    let mut breakdown = false;

    while iterations < opts.max_iter {
        let r_norm = norm(&r);
        if rho.norm() <= f64::EPSILON * r_norm * r_norm {
            breakdown = true;
            break;
        }
        op.apply(&p, &mut q);
        iterations += 1;
        let mu = bilinear(&p, &q);
        if mu.norm() == 0.0 || !mu.re.is_finite() || !mu.im.is_finite() {
            if !all_finite(&q) {
                return Err(Error::NonFinite(iterations));
            }
            breakdown = true;
            break;
        }
        let alpha = rho / mu;
        for ((xi, ri), (pi, qi)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&q)) {
            *xi += alpha * pi;
            *ri -= alpha * qi;
        }
        if !all_finite(&x) || !all_finite(&r) {
            return Err(Error::NonFinite(iterations));
        }

        if norm(&r) <= opts.tol * rhs_norm {
            let true_r = residual(op, &x, rhs);
            if norm(&true_r) <= opts.tol * rhs_norm {
                converged = true;
                break;
            }
            log::debug!("cocg: residual drifted at iteration {iterations}, restarting");
            r = true_r;
            p.clone_from(&r);
            rho = bilinear(&r, &r);
            continue;
        }

        let rho_next = bilinear(&r, &r);
        let beta = rho_next / rho;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rho = rho_next;
    }

    let rel_residual = relative_residual(op, &x, rhs);
    Ok(SolveReport {
        solution: x,
        iterations,
        converged: converged && rel_residual <= opts.tol,
        rel_residual,
        breakdown,
        elapsed: start.elapsed(),
    })
}
