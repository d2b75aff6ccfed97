//! Linear solves with `diag(m) − s·L`, L the grid Laplacian: the Thomas
//! algorithm in 1D, Jacobi-preconditioned CG in the weighted inner product
//! in 2D. Dirichlet entries of the solution are zero.

use super::grid::Grid;

/// Reusable buffers for [`solve_shifted`].
#[derive(Debug, Clone, Default)]
pub struct SolverWork {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    r: Vec<f64>,
    z: Vec<f64>,
    d: Vec<f64>,
    q: Vec<f64>,
    pub last_iterations: usize,
}

/// Solves `(diag(m) − s L) x = rhs` on the free nodes. `x` holds the initial
/// guess for CG on entry.
pub fn solve_shifted(grid: &Grid, m: &[f64], s: f64, rhs: &[f64], x: &mut [f64], work: &mut SolverWork) {
    if grid.dim == 1 {
        thomas(grid, m, s, rhs, x, work);
    } else {
        pcg(grid, m, s, rhs, x, work);
    }
}

fn thomas(grid: &Grid, m: &[f64], s: f64, rhs: &[f64], x: &mut [f64], w: &mut SolverWork) {
    let n = grid.len();
    let e = s / (grid.h[0] * grid.h[0]);
    w.a.resize(n, 0.0);
    w.b.resize(n, 0.0);
    w.c.resize(n, 0.0);
    w.d.resize(n, 0.0);
    for i in 0..n {
        if !grid.is_free(i) {
            (w.a[i], w.b[i], w.c[i], w.d[i]) = (0.0, 1.0, 0.0, 0.0);
            continue;
        }
        let (lo, hi) = if i == 0 {
            (0.0, 2.0 * e)
        } else if i + 1 == n {
            (2.0 * e, 0.0)
        } else {
            (e, e)
        };
        w.a[i] = -lo;
        w.b[i] = m[i] + 2.0 * e;
        w.c[i] = -hi;
        w.d[i] = rhs[i];
    }
    // forward sweep
    for i in 1..n {
        let f = w.a[i] / w.b[i - 1];
        w.b[i] -= f * w.c[i - 1];
        w.d[i] -= f * w.d[i - 1];
    }
    x[n - 1] = w.d[n - 1] / w.b[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (w.d[i] - w.c[i] * x[i + 1]) / w.b[i];
    }
    for i in 0..n {
        if !grid.is_free(i) {
            x[i] = 0.0;
        }
    }
    w.last_iterations = 1;
}

fn apply(grid: &Grid, m: &[f64], s: f64, x: &[f64], out: &mut [f64]) {
    grid.laplacian_unchecked(x, out);
    for k in 0..x.len() {
        out[k] = if grid.is_free(k) { m[k] * x[k] - s * out[k] } else { 0.0 };
    }
}

fn pcg(grid: &Grid, m: &[f64], s: f64, rhs: &[f64], x: &mut [f64], w: &mut SolverWork) {
    let n = grid.len();
    let diag_l = 2.0 / (grid.h[0] * grid.h[0]) + 2.0 / (grid.h[1] * grid.h[1]);
    let wt: Vec<f64> = (0..n).map(|k| if grid.is_free(k) { grid.weight(k) } else { 0.0 }).collect();
    let dot = |u: &[f64], v: &[f64]| -> f64 { (0..n).map(|k| wt[k] * u[k] * v[k]).sum() };
    w.r.resize(n, 0.0);
    w.z.resize(n, 0.0);
    w.d.resize(n, 0.0);
    w.q.resize(n, 0.0);
    for k in 0..n {
        if !grid.is_free(k) {
            x[k] = 0.0;
        }
    }
    apply(grid, m, s, x, &mut w.q);
    for k in 0..n {
        w.r[k] = if grid.is_free(k) { rhs[k] - w.q[k] } else { 0.0 };
    }
    let b_norm = dot(rhs, rhs).sqrt();
    let tol = 1e-14 * b_norm.max(f64::MIN_POSITIVE);
    let precond = |k: usize| 1.0 / (m[k] + s * diag_l);
    for k in 0..n {
        w.z[k] = w.r[k] * precond(k);
    }
    w.d.copy_from_slice(&w.z);
    let mut rz = dot(&w.r, &w.z);
    let mut it = 0;
    let max_it = 10 * n;
    while dot(&w.r, &w.r).sqrt() > tol && it < max_it {
        apply(grid, m, s, &w.d, &mut w.q);
        let dq = dot(&w.d, &w.q);
        if dq == 0.0 {
            break;
        }
        let alpha = rz / dq;
        for k in 0..n {
            x[k] += alpha * w.d[k];
            w.r[k] -= alpha * w.q[k];
            w.z[k] = w.r[k] * precond(k);
        }
        let rz_new = dot(&w.r, &w.z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            w.d[k] = w.z[k] + beta * w.d[k];
        }
        it += 1;
    }
    w.last_iterations = it;
}
