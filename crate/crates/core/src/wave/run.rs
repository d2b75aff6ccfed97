//! Time loop with probes, snapshots and external forcing.

use std::path::Path;

use super::excitation::Excitation;
use super::grid::{build_grid, Grid};
use super::stepper::{Damping, Monitors, WaveField, WaveProblem, WaveStepper};
use crate::config::{Attenuation, NonlinearityCoefficient, SimulationConfig};
use crate::error::{Error, Result};

/// Pressure history at one node, sampled every wave step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeTrace {
    pub node: usize,
    pub location: [f64; 2],
    pub t0: f64,
    pub dt: f64,
    pub pressures: Vec<f64>,
}

impl ProbeTrace {
    pub fn times(&self) -> Vec<f64> {
        (0..self.pressures.len()).map(|i| self.t0 + i as f64 * self.dt).collect()
    }

    pub fn peak(&self) -> f64 {
        self.pressures.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn trough(&self) -> f64 {
        self.pressures.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn peak_abs(&self) -> f64 {
        self.pressures.iter().fold(0.0, |m, p| m.max(p.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct WaveOutput {
    pub grid: Grid,
    pub dt: f64,
    pub probes: Vec<ProbeTrace>,
    pub snapshots: Vec<Snapshot>,
    pub monitors: Monitors,
    pub steps: u64,
    pub final_field: WaveField,
}

/// Nonlinearity coefficient per node.
pub fn k_field(grid: &Grid, k: &NonlinearityCoefficient) -> Result<Vec<f64>> {
    match k {
        NonlinearityCoefficient::Constant(v) => Ok(vec![*v; grid.len()]),
        NonlinearityCoefficient::Profile(path) => k_profile(grid, path),
    }
}

fn k_profile(grid: &Grid, path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let cols = grid.dim + 1;
    let mut points: Vec<([f64; 2], f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if v.len() == cols => {
                let y = if cols == 3 { v[1] } else { 0.0 };
                points.push(([v[0], y], v[cols - 1]));
            }
            Err(_) if idx == 0 => continue,
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {cols} numeric columns"),
                })
            }
        }
    }
    if points.is_empty() {
        return Err(Error::TooShort { need: 1, got: 0 });
    }
    Ok((0..grid.len())
        .map(|node| {
            let x = grid.coords(node);
            points
                .iter()
                .min_by(|a, b| {
                    let da = (a.0[0] - x[0]).hypot(a.0[1] - x[1]);
                    let db = (b.0[0] - x[0]).hypot(b.0[1] - x[1]);
                    da.total_cmp(&db)
                })
                .map(|p| p.1)
                .unwrap()
        })
        .collect())
}

impl WaveProblem {
    /// Grid, excitation, coefficients and step of a config. Without an
    /// explicit step, dt = 0.5·h_min/c.
    pub fn from_config(cfg: &SimulationConfig) -> Result<Self> {
        cfg.check()?;
        let grid = build_grid(&cfg.wave)?;
        let p = &cfg.params;
        let excitation = cfg
            .wave
            .excite
            .map(|_| Excitation::new(&grid, cfg.wave.a_p, cfg.wave.f_p, cfg.wave.focus, p.c));
        let h_min = if grid.dim == 2 { grid.h[0].min(grid.h[1]) } else { grid.h[0] };
        let dt = cfg.wave.dt.unwrap_or(0.5 * h_min / p.c);
        let damping = match cfg.attenuation {
            Attenuation::Strong => Damping::Strong { b: p.b },
            Attenuation::Fractional => Damping::Fractional {
                b: p.b,
                tau: p.tau,
                alpha: p.alpha,
            },
        };
        Ok(Self {
            k: k_field(&grid, &p.k)?,
            grid,
            excitation,
            c: p.c,
            damping,
            newmark: cfg.newmark,
            gamma_floor: cfg.gamma_floor,
            dt,
        })
    }

    /// Number of steps needed to reach `t_final`.
    pub fn steps_to(&self, t_final: f64) -> u64 {
        (t_final / self.dt - 1e-9).ceil().max(0.0) as u64
    }
}

/// Optional run controls.
pub struct RunControl<'a> {
    pub probes: Vec<usize>,
    pub snapshots: usize,
    /// Fills f at the given time; called for t = 0 and every new level.
    pub forcing: Option<&'a mut dyn FnMut(f64, &mut [f64])>,
}

/// Runs `steps` steps from rest.
pub fn run_problem(problem: WaveProblem, steps: u64, control: RunControl<'_>) -> Result<WaveOutput> {
    let n = problem.grid.len();
    let dt = problem.dt;
    let grid = problem.grid.clone();
    let RunControl {
        probes,
        snapshots,
        mut forcing,
    } = control;
    let mut f = vec![0.0; n];
    let f0 = match forcing.as_mut() {
        Some(cb) => {
            cb(0.0, &mut f);
            Some(f.as_slice())
        }
        None => None,
    };
    let mut stepper = WaveStepper::new(problem, vec![0.0; n], vec![0.0; n], f0)?;
    let mut traces: Vec<ProbeTrace> = probes
        .iter()
        .map(|&node| ProbeTrace {
            node,
            location: grid.coords(node),
            t0: 0.0,
            dt,
            pressures: Vec::with_capacity(steps as usize + 1),
        })
        .collect();
    let snap_steps: Vec<u64> = (1..=snapshots as u64).map(|i| (i * steps) / snapshots as u64).collect();
    let mut snaps = Vec::new();
    let record = |st: &WaveStepper, traces: &mut Vec<ProbeTrace>| {
        for tr in traces.iter_mut() {
            tr.pressures.push(st.field().p[tr.node]);
        }
    };
    record(&stepper, &mut traces);
    for step in 1..=steps {
        match forcing.as_mut() {
            Some(cb) => {
                cb(step as f64 * dt, &mut f);
                stepper.step(Some(&f))?;
            }
            None => stepper.step(None)?,
        }
        record(&stepper, &mut traces);
        if snap_steps.contains(&step) {
            snaps.push(Snapshot {
                time: stepper.time(),
                p: stepper.field().p.clone(),
            });
        }
    }
    Ok(WaveOutput {
        grid,
        dt,
        probes: traces,
        snapshots: snaps,
        monitors: stepper.monitors(),
        steps,
        final_field: stepper.field().clone(),
    })
}

/// Runs the wave experiment of a config: probes at the configured points,
/// `wave.snapshots` full-field snapshots.
pub fn run_wave(cfg: &SimulationConfig) -> Result<WaveOutput> {
    let problem = WaveProblem::from_config(cfg)?;
    let probes = cfg.probes.iter().map(|&pt| problem.grid.nearest(pt)).collect();
    let steps = problem.steps_to(cfg.wave.t_final);
    run_problem(
        problem,
        steps,
        RunControl {
            probes,
            snapshots: cfg.wave.snapshots,
            forcing: None,
        },
    )
}
