use std::time::Instant;

use num_complex::Complex64;

use super::{
    all_finite, check_dims, inner, norm, relative_residual, residual, LinearOperator,
    SolveOptions, SolveReport,
};
use crate::error::{Error, Result};

/// Restarted GMRES with modified Gram-Schmidt Arnoldi and complex Givens
/// rotations. `iterations` counts operator applications inside cycles.
pub fn gmres<A: LinearOperator + ?Sized>(
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

    let m = opts.restart.min(n).max(1);
    let mut iterations = 0;
    let mut converged = false;
    let mut stagnated = false;

    while iterations < opts.max_iter {
        let r = if iterations == 0 { rhs.to_vec() } else { residual(op, &x, rhs) };
        let beta = norm(&r);
        if beta <= opts.tol * rhs_norm {
            converged = true;
            break;
        }
        if stagnated {
            break;
        }

        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // column-major Hessenberg, column j has j + 2 entries
        let mut hess: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<Complex64> = Vec::with_capacity(m);
        let mut g = vec![zero; m + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut steps = 0;

        for j in 0..m {
            if iterations >= opts.max_iter {
                break;
            }
            let mut w = vec![zero; n];
            op.apply(&basis[j], &mut w);
            iterations += 1;
            if !all_finite(&w) {
                return Err(Error::NonFinite(iterations));
            }
            let mut col = vec![zero; j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = inner(v, &w);
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
                col[i] = hij;
            }
            let h_next = norm(&w);
            col[j + 1] = Complex64::new(h_next, 0.0);

            for i in 0..j {
                let (a, b) = (col[i], col[i + 1]);
                col[i] = cs[i] * a + sn[i] * b;
                col[i + 1] = -sn[i].conj() * a + cs[i] * b;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            col[j] = c * col[j] + s * col[j + 1];
            col[j + 1] = zero;
            g[j + 1] = -s.conj() * g[j];
            g[j] *= c;
            cs.push(c);
            sn.push(s);
            hess.push(col);
            steps = j + 1;

            let happy = h_next <= 1e-14 * beta;
            if !happy {
                basis.push(w.iter().map(|v| v / h_next).collect());
            }
            if g[j + 1].norm() <= opts.tol * rhs_norm || happy {
                break;
            }
        }

        if steps == 0 {
            break;
        }
        // back substitution on the triangular factor
        let mut y = vec![zero; steps];
        for i in (0..steps).rev() {
            let mut acc = g[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                acc -= hess[k][i] * yk;
            }
            let diag = hess[i][i];
            if diag.norm() == 0.0 {
                stagnated = true;
                break;
            }
            y[i] = acc / diag;
        }
        for (v, yi) in basis.iter().zip(&y) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += yi * vk;
            }
        }
        if !all_finite(&x) {
            return Err(Error::NonFinite(iterations));
        }
        if iterations >= opts.max_iter {
            converged = relative_residual(op, &x, rhs) <= opts.tol;
            break;
        }
    }

    let rel_residual = relative_residual(op, &x, rhs);
    Ok(SolveReport {
        solution: x,
        iterations,
        converged: converged && rel_residual <= opts.tol,
        rel_residual,
        breakdown: stagnated,
        elapsed: start.elapsed(),
    })
}

/// Rotation `[c, s; −s̄, c]` mapping `(a, b)` to `(·, 0)`; `c` is real.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let t = an.hypot(bn);
    (an / t, (a / an) * b.conj() / t)
}
