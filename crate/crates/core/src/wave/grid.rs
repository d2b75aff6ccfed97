//! Structured 1D/2D grids, boundary tags and the finite-difference Laplacian.

use crate::config::{SideCondition, WaveSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeTag {
    Interior,
    DirichletZero,
    NeumannExcited,
    NeumannZero,
}

/// Uniform grid; node (i, j) has index `j * nx + i`. In 1D `ny = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dim: usize,
    pub extent: [f64; 2],
    pub nodes: [usize; 2],
    pub h: [f64; 2],
    pub sides: [SideCondition; 4],
    tags: Vec<NodeTag>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes[0] * self.nodes[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tags(&self) -> &[NodeTag] {
        &self.tags
    }

    pub fn tag(&self, node: usize) -> NodeTag {
        self.tags[node]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes[0] + i
    }

    pub fn ij(&self, node: usize) -> (usize, usize) {
        (node % self.nodes[0], node / self.nodes[0])
    }

    pub fn coords(&self, node: usize) -> [f64; 2] {
        let (i, j) = self.ij(node);
        [i as f64 * self.h[0], j as f64 * self.h[1]]
    }

    /// Nearest node to a point; coordinates are clamped into the domain.
    pub fn nearest(&self, point: [f64; 2]) -> usize {
        let pick = |axis: usize| {
            let n = self.nodes[axis];
            if n == 1 {
                return 0;
            }
            let x = point[axis].clamp(0.0, self.extent[axis]);
            ((x / self.h[axis]).round() as usize).min(n - 1)
        };
        self.index(pick(0), pick(1))
    }

    /// Quadrature weight of a node (trapezoid rule on Neumann sides). The
    /// Laplacian is symmetric in the inner product these weights define.
    pub fn weight(&self, node: usize) -> f64 {
        let (i, j) = self.ij(node);
        let mut w = self.h[0];
        if i == 0 || i + 1 == self.nodes[0] {
            w *= 0.5;
        }
        if self.dim == 2 {
            w *= self.h[1];
            if j == 0 || j + 1 == self.nodes[1] {
                w *= 0.5;
            }
        }
        w
    }

    pub fn is_free(&self, node: usize) -> bool {
        self.tags[node] != NodeTag::DirichletZero
    }

    /// Linear part of the Laplacian: ghost nodes mirror the interior
    /// (homogeneous Neumann data); Dirichlet rows are zero.
    pub fn laplacian(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.len();
        if p.len() != n || out.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: if p.len() != n { p.len() } else { out.len() },
            });
        }
        self.laplacian_unchecked(p, out);
        Ok(())
    }

    pub(crate) fn laplacian_unchecked(&self, p: &[f64], out: &mut [f64]) {
        let [nx, ny] = self.nodes;
        let ix2 = 1.0 / (self.h[0] * self.h[0]);
        let iy2 = if self.dim == 2 { 1.0 / (self.h[1] * self.h[1]) } else { 0.0 };
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                if self.tags[k] == NodeTag::DirichletZero {
                    out[k] = 0.0;
                    continue;
                }
                let c = p[k];
                let west = if i == 0 { p[k + 1] } else { p[k - 1] };
                let east = if i + 1 == nx { p[k - 1] } else { p[k + 1] };
                let mut s = (west - 2.0 * c + east) * ix2;
                if self.dim == 2 {
                    let south = if j == 0 { p[k + nx] } else { p[k - nx] };
                    let north = if j + 1 == ny { p[k - nx] } else { p[k + nx] };
                    s += (south - 2.0 * c + north) * iy2;
                }
                out[k] = s;
            }
        }
    }

    /// Contribution 2g/h of outward normal-derivative data `g` prescribed on
    /// the left side.
    #[inline]
    pub fn flux_factor(&self) -> f64 {
        2.0 / self.h[0]
    }
}

fn side_of(grid_nodes: [usize; 2], dim: usize, i: usize, j: usize) -> [bool; 4] {
    [
        i == 0,
        i + 1 == grid_nodes[0],
        dim == 2 && j == 0,
        dim == 2 && j + 1 == grid_nodes[1],
    ]
}

/// Builds the grid of a wave spec and tags its boundary nodes. A node on a
/// Dirichlet side is Dirichlet; a left-side node whose `y` lies in the
/// excited interval is excited (the whole left end in 1D).
pub fn build_grid(spec: &WaveSpec) -> Result<Grid> {
    if spec.dim != 1 && spec.dim != 2 {
        return Err(Error::Invalid(format!("dim must be 1 or 2, got {}", spec.dim)));
    }
    let axes = spec.dim;
    let mut nodes = [1usize, 1];
    let mut h = [1.0f64, 1.0];
    let mut extent = [spec.extent[0], 0.0];
    for a in 0..axes {
        if !(spec.extent[a] > 0.0) || !spec.extent[a].is_finite() {
            return Err(Error::Invalid(format!("extent along axis {a} must be > 0, got {}", spec.extent[a])));
        }
        if spec.nodes[a] < 3 {
            return Err(Error::Invalid(format!("node count along axis {a} must be ≥ 3, got {}", spec.nodes[a])));
        }
        nodes[a] = spec.nodes[a];
        extent[a] = spec.extent[a];
        h[a] = spec.extent[a] / (spec.nodes[a] - 1) as f64;
    }
    let mut tags = Vec::with_capacity(nodes[0] * nodes[1]);
    for j in 0..nodes[1] {
        for i in 0..nodes[0] {
            let on = side_of(nodes, axes, i, j);
            let tag = if !on.iter().any(|&b| b) {
                NodeTag::Interior
            } else if (0..4).any(|s| on[s] && spec.sides[s] == SideCondition::Dirichlet) {
                NodeTag::DirichletZero
            } else if on[0] && in_interval(spec, j as f64 * h[1]) {
                NodeTag::NeumannExcited
            } else {
                NodeTag::NeumannZero
            };
            tags.push(tag);
        }
    }
    Ok(Grid {
        dim: axes,
        extent,
        nodes,
        h,
        sides: spec.sides,
        tags,
    })
}

fn in_interval(spec: &WaveSpec, y: f64) -> bool {
    match spec.excite {
        None => false,
        Some(_) if spec.dim == 1 => true,
        Some([lo, hi]) => y >= lo - 1e-12 && y <= hi + 1e-12,
    }
}
