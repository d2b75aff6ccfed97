//! Time-delayed sinusoidal normal-derivative data on the excited boundary.

use std::f64::consts::PI;

use super::grid::{Grid, NodeTag};
use crate::error::{Error, Result};

/// `g_i(t) = A_p sin(2π f_p (t − τ_i))` for `t ≥ τ_i`, zero before.
///
/// With a focus point the farthest excited node fires first:
/// `τ_i = (d_max − d_i)/c`, so all wavelets reach the focus together.
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    pub amplitude: f64,
    pub frequency: f64,
    nodes: Vec<usize>,
    delays: Vec<f64>,
    /// Position of each grid node in `nodes`, or `usize::MAX`.
    slot: Vec<usize>,
}

impl Excitation {
    pub fn new(grid: &Grid, amplitude: f64, frequency: f64, focus: Option<[f64; 2]>, c: f64) -> Self {
        let nodes: Vec<usize> = (0..grid.len())
            .filter(|&k| grid.tag(k) == NodeTag::NeumannExcited)
            .collect();
        let delays = match focus {
            None => vec![0.0; nodes.len()],
            Some(f) => {
                let dist: Vec<f64> = nodes
                    .iter()
                    .map(|&k| {
                        let x = grid.coords(k);
                        let dy = if grid.dim == 2 { x[1] - f[1] } else { 0.0 };
                        // snapped to 1 pm so mirror-image nodes get equal delays
                        ((x[0] - f[0]).hypot(dy) * 1e12).round() * 1e-12
                    })
                    .collect();
                let d_max = dist.iter().copied().fold(0.0, f64::max);
                dist.iter().map(|d| (d_max - d) / c).collect()
            }
        };
        let mut slot = vec![usize::MAX; grid.len()];
        for (s, &k) in nodes.iter().enumerate() {
            slot[k] = s;
        }
        Self {
            amplitude,
            frequency,
            nodes,
            delays,
            slot,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn delay(&self, node: usize) -> Option<f64> {
        self.slot.get(node).filter(|&&s| s != usize::MAX).map(|&s| self.delays[s])
    }

    #[inline]
    fn phase(&self, t: f64, delay: f64) -> Option<f64> {
        let tt = t - delay;
        (tt >= 0.0).then_some(2.0 * PI * self.frequency * tt)
    }

    /// Normal derivative at slot `s` (position in [`Self::nodes`]).
    #[inline]
    pub fn value_at_slot(&self, t: f64, s: usize) -> f64 {
        self.phase(t, self.delays[s]).map_or(0.0, |ph| self.amplitude * ph.sin())
    }

    /// Time derivative of the normal derivative at slot `s`.
    #[inline]
    pub fn rate_at_slot(&self, t: f64, s: usize) -> f64 {
        self.phase(t, self.delays[s])
            .map_or(0.0, |ph| 2.0 * PI * self.frequency * self.amplitude * ph.cos())
    }

    /// Normal derivative prescribed at `node`: the excitation on excited
    /// nodes, zero on other Neumann nodes.
    pub fn value(&self, grid: &Grid, t: f64, node: usize) -> Result<f64> {
        match grid.tags().get(node) {
            Some(NodeTag::NeumannExcited) => Ok(self.value_at_slot(t, self.slot[node])),
            Some(NodeTag::NeumannZero) => Ok(0.0),
            Some(tag) => Err(Error::Invalid(format!("node {node} is {tag:?}, not a Neumann node"))),
            None => Err(Error::Invalid(format!("node {node} is outside the grid"))),
        }
    }

    /// Adds `scale · 2g/h` at every excited node, using the data (`rate =
    /// false`) or its time derivative.
    pub fn add_flux(&self, grid: &Grid, t: f64, scale: f64, rate: bool, out: &mut [f64]) {
        let f = scale * grid.flux_factor();
        for (s, &k) in self.nodes.iter().enumerate() {
            let g = if rate { self.rate_at_slot(t, s) } else { self.value_at_slot(t, s) };
            out[k] += f * g;
        }
    }
}
