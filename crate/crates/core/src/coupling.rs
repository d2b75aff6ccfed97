//! Westervelt-bubble orchestration: one-way (probe traces drive bubbles) and
//! explicit multirate two-way coupling through the source ξ(R³)_tt.

use rayon::prelude::*;

use crate::bubble::{BubbleModel, BubbleState, ModelKind};
use crate::config::SimulationConfig;
use crate::error::{Error, Result};
use crate::ode::{
    integrate_interval, simulate_bubble, BubbleTrajectory, OdeSettings, PressureDrive, SampledTrace, StepControl,
    Termination,
};
use crate::wave::{run_problem, NodeTag, ProbeTrace, RunControl, WaveOutput, WaveProblem, WaveStepper};

/// Micro-steps allowed per bubble and macro step.
pub const MICRO_STEP_LIMIT: u64 = 1_000_000_000;

/// ξ (R³)_tt = ξ (3R²R_tt + 6R R_t²).
#[inline]
pub fn bubble_source(r: f64, r_t: f64, r_tt: f64, xi: f64) -> f64 {
    xi * (3.0 * r * r * r_tt + 6.0 * r * r_t * r_t)
}

#[derive(Debug, Clone)]
pub struct OneWayOutput {
    pub wave: WaveOutput,
    /// One trajectory per probe, in probe order.
    pub bubbles: Vec<BubbleTrajectory>,
}

/// Drives a bubble at every probe with the probe's pressure trace.
pub fn bubbles_from_traces(cfg: &SimulationConfig, traces: &[ProbeTrace]) -> Result<Vec<BubbleTrajectory>> {
    traces
        .par_iter()
        .map(|tr| {
            let samples = SampledTrace::uniform(tr.t0, tr.dt, tr.pressures.clone())?;
            let t_end = tr.t0 + (tr.pressures.len() - 1) as f64 * tr.dt;
            let settings = OdeSettings::new(t_end, cfg.lambda, &cfg.ode);
            simulate_bubble(
                cfg.model,
                &cfg.params,
                &PressureDrive::Sampled(samples),
                &settings,
                cfg.nonlinear_volume,
            )
        })
        .collect()
}

/// Wave run with ξ = 0, then one bubble per probe over the wave duration.
pub fn run_one_way(cfg: &SimulationConfig) -> Result<OneWayOutput> {
    let wave = crate::wave::run_wave(cfg)?;
    let bubbles = bubbles_from_traces(cfg, &wave.probes)?;
    Ok(OneWayOutput { wave, bubbles })
}

/// Nodes carrying a bubble: every free interior node in 1D, a lattice with
/// the configured stride in 2D.
pub fn coupled_nodes(problem: &WaveProblem, stride: usize) -> Vec<usize> {
    let g = &problem.grid;
    let stride = stride.max(1);
    (0..g.len())
        .filter(|&k| g.tag(k) == NodeTag::Interior)
        .filter(|&k| {
            if g.dim == 1 {
                return true;
            }
            let (i, j) = g.ij(k);
            i % stride == 0 && j % stride == 0
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CoupledOutput {
    pub wave: WaveOutput,
    pub nodes: Vec<usize>,
    /// Bubble trajectories at the coupled nodes, sampled at macro steps.
    pub bubbles: Vec<BubbleTrajectory>,
    pub micro_steps: u64,
}

#[derive(Debug, Clone, Copy)]
struct NodeBubble {
    state: BubbleState,
    r_tt: f64,
}

/// Explicit multirate coupling. Each macro step advances the field with
/// the source frozen at the step start, then integrates every bubble across
/// the step with adaptive micro-steps under the linearly interpolated nodal
/// pressure.
pub fn run_coupled(cfg: &SimulationConfig) -> Result<CoupledOutput> {
    let problem = WaveProblem::from_config(cfg)?;
    let steps = problem.steps_to(cfg.wave.t_final);
    let probes: Vec<usize> = cfg.probes.iter().map(|&pt| problem.grid.nearest(pt)).collect();
    let xi = cfg.xi();
    if cfg.model == ModelKind::LinearVolume {
        return Err(Error::Invalid("coupled runs need a radius model, not linear_volume".into()));
    }
    let nodes = coupled_nodes(&problem, cfg.coupled_stride);
    let model = BubbleModel::new(cfg.model, &cfg.params);
    let control = StepControl {
        lambda: cfg.lambda,
        dt_min: cfg.ode.dt_min,
        dt_max: cfg.ode.dt_max,
    };
    let r_floor = cfg.ode.r_floor;
    let n = problem.grid.len();
    let dt = problem.dt;
    let grid = problem.grid.clone();

    let rest = BubbleState::at_rest(&cfg.params);
    let r_tt0 = model.acceleration_raw(rest.radius, rest.velocity, 0.0);
    let mut bubbles = vec![NodeBubble { state: rest, r_tt: r_tt0 }; nodes.len()];
    let mut trajs: Vec<BubbleTrajectory> = nodes
        .iter()
        .map(|_| BubbleTrajectory {
            times: vec![0.0],
            radii: vec![rest.radius],
            velocities: vec![0.0],
            model: cfg.model,
            termination: Termination::Completed,
            steps: 0,
            dt_range: (f64::INFINITY, 0.0),
        })
        .collect();

    let mut source = vec![0.0; n];
    let fill_source = |bubbles: &[NodeBubble], source: &mut [f64]| {
        for (b, &k) in bubbles.iter().zip(&nodes) {
            source[k] = bubble_source(b.state.radius, b.state.velocity, b.r_tt, xi);
        }
    };
    fill_source(&bubbles, &mut source);
    let mut stepper = WaveStepper::new(
        problem,
        vec![0.0; n],
        vec![0.0; n],
        (xi != 0.0).then_some(source.as_slice()),
    )?;
    let mut traces: Vec<ProbeTrace> = probes
        .iter()
        .map(|&node| ProbeTrace {
            node,
            location: grid.coords(node),
            t0: 0.0,
            dt,
            pressures: vec![stepper.field().p[node]],
        })
        .collect();
    let mut micro_total = 0u64;
    let mut snapshots = Vec::new();
    let snap_steps: Vec<u64> = (1..=cfg.wave.snapshots as u64)
        .map(|i| (i * steps) / cfg.wave.snapshots as u64)
        .collect();

    for step in 1..=steps {
        let t0 = stepper.time();
        let p_old: Vec<f64> = nodes.iter().map(|&k| stepper.field().p[k]).collect();
        if xi != 0.0 {
            fill_source(&bubbles, &mut source);
            stepper.step(Some(&source))?;
        } else {
            stepper.step(None)?;
        }
        let t1 = stepper.time();
        let field = stepper.field();
        let results: Vec<Result<(NodeBubble, u64)>> = bubbles
            .par_iter()
            .zip(nodes.par_iter())
            .zip(p_old.par_iter())
            .map(|((b, &k), &p0)| {
                let drive = PressureDrive::Ramp {
                    t0,
                    t1,
                    p0,
                    p1: field.p[k],
                };
                let out = integrate_interval(&model, b.state, t0, t1, &drive, &control, r_floor, MICRO_STEP_LIMIT);
                match out.termination {
                    Termination::Completed if out.time < t1 => Err(Error::MicroStepOverflow {
                        limit: MICRO_STEP_LIMIT,
                        time: t0,
                    }),
                    Termination::Completed => Ok((
                        NodeBubble {
                            state: out.state,
                            r_tt: out.acceleration,
                        },
                        out.steps,
                    )),
                    other => Err(Error::BubbleFailure {
                        node: k,
                        time: out.time,
                        reason: other.to_string(),
                    }),
                }
            })
            .collect();
        for (i, res) in results.into_iter().enumerate() {
            let (nb, micro) = res?;
            bubbles[i] = nb;
            micro_total += micro;
            let tr = &mut trajs[i];
            tr.times.push(t1);
            tr.radii.push(nb.state.radius);
            tr.velocities.push(nb.state.velocity);
            tr.steps += micro;
        }
        for tr in traces.iter_mut() {
            tr.pressures.push(stepper.field().p[tr.node]);
        }
        if snap_steps.contains(&step) {
            snapshots.push(crate::wave::Snapshot {
                time: t1,
                p: stepper.field().p.clone(),
            });
        }
    }
    for tr in trajs.iter_mut() {
        tr.dt_range = (0.0, 0.0);
    }
    Ok(CoupledOutput {
        wave: WaveOutput {
            grid,
            dt,
            probes: traces,
            snapshots,
            monitors: stepper.monitors(),
            steps,
            final_field: stepper.field().clone(),
        },
        nodes,
        bubbles: trajs,
        micro_steps: micro_total,
    })
}

/// Probe traces of the plain wave run, for comparison with coupled runs.
pub fn run_wave_only(cfg: &SimulationConfig) -> Result<WaveOutput> {
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
