//! Discrete L², H¹ and H² norms on a grid (trapezoid weights).

use super::grid::Grid;

pub fn l2(grid: &Grid, v: &[f64]) -> f64 {
    (0..grid.len()).map(|k| grid.weight(k) * v[k] * v[k]).sum::<f64>().sqrt()
}

/// ‖∇v‖ from one-sided differences along grid edges.
pub fn grad(grid: &Grid, v: &[f64]) -> f64 {
    let [nx, ny] = grid.nodes;
    let edge_w = |n: usize, j: usize| if grid.dim == 2 && (j == 0 || j + 1 == n) { 0.5 } else { 1.0 };
    let hy = if grid.dim == 2 { grid.h[1] } else { 1.0 };
    let mut s = 0.0;
    for j in 0..ny {
        for i in 0..nx - 1 {
            let k = grid.index(i, j);
            let d = (v[k + 1] - v[k]) / grid.h[0];
            s += d * d * grid.h[0] * hy * edge_w(ny, j);
        }
    }
    if grid.dim == 2 {
        for j in 0..ny - 1 {
            for i in 0..nx {
                let k = grid.index(i, j);
                let d = (v[k + nx] - v[k]) / grid.h[1];
                s += d * d * grid.h[0] * grid.h[1] * edge_w(nx, i);
            }
        }
    }
    s.sqrt()
}

pub fn h1(grid: &Grid, v: &[f64]) -> f64 {
    l2(grid, v).hypot(grad(grid, v))
}

/// H¹ norm plus the L² norm of the homogeneous discrete Laplacian.
pub fn h2(grid: &Grid, v: &[f64]) -> f64 {
    let mut lap = vec![0.0; grid.len()];
    grid.laplacian_unchecked(v, &mut lap);
    h1(grid, v).hypot(l2(grid, &lap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{SideCondition, WaveSpec};
    use crate::wave::grid::build_grid;

    #[test]
    fn norms_of_simple_fields() {
        let spec = WaveSpec {
            dim: 1,
            extent: [2.0, 0.0],
            nodes: [201, 0],
            sides: [SideCondition::Neumann; 4],
            ..WaveSpec::default()
        };
        let g = build_grid(&spec).unwrap();
        let one = vec![1.0; g.len()];
        assert!((l2(&g, &one) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(grad(&g, &one), 0.0);
        let x: Vec<f64> = (0..g.len()).map(|k| g.coords(k)[0]).collect();
        // ∫_0^2 1 dx = 2 for the gradient of x
        assert!((grad(&g, &x) - 2f64.sqrt()).abs() < 1e-12);
        assert!(h2(&g, &x) >= h1(&g, &x));

        let mut s2 = WaveSpec::default();
        s2.extent = [1.0, 3.0];
        s2.nodes = [11, 31];
        s2.sides = [SideCondition::Neumann; 4];
        let g2 = build_grid(&s2).unwrap();
        let one = vec![1.0; g2.len()];
        assert!((l2(&g2, &one) - 3f64.sqrt()).abs() < 1e-12);
        let y: Vec<f64> = (0..g2.len()).map(|k| g2.coords(k)[1]).collect();
        assert!((grad(&g2, &y) - 3f64.sqrt()).abs() < 1e-12);
    }
}
