//! Classical RK4 for the bubble ODEs with radius-adaptive steps
//! `dt = R^λ`, positivity guards and uniform resampling of the output.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::bubble::{linear_volume_rhs, BubbleModel, BubbleState, ModelKind};
use crate::config::{OdeLimits, PhysicalParams, SimulationConfig};
use crate::error::{Error, Result};

/// External pressure seen by a bubble.
#[derive(Debug, Clone, PartialEq)]
pub enum PressureDrive {
    Zero,
    /// `amplitude · sin(2π frequency t)`
    Sine { amplitude: f64, frequency: f64 },
    /// Recorded samples, linearly interpolated and held constant outside.
    Sampled(SampledTrace),
    /// Linear ramp from `p0` at `t0` to `p1` at `t1` (held outside).
    Ramp { t0: f64, t1: f64, p0: f64, p1: f64 },
}

impl PressureDrive {
    #[inline]
    pub fn pressure(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Sine { amplitude, frequency } => amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin(),
            Self::Sampled(trace) => trace.at(t),
            Self::Ramp { t0, t1, p0, p1 } => {
                if t <= *t0 {
                    *p0
                } else if t >= *t1 {
                    *p1
                } else {
                    p0 + (p1 - p0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }
}

/// Pressure samples at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrace {
    times: Vec<f64>,
    values: Vec<f64>,
    uniform_dt: Option<f64>,
}

impl SampledTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SizeMismatch {
                expected: times.len(),
                got: values.len(),
            });
        }
        if times.is_empty() {
            return Err(Error::TooShort { need: 1, got: 0 });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("trace times must be strictly increasing".into()));
        }
        let uniform_dt = if times.len() >= 2 {
            let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            let uniform = times
                .iter()
                .enumerate()
                .all(|(i, &t)| (t - (times[0] + i as f64 * dt)).abs() <= 1e-9 * dt);
            uniform.then_some(dt)
        } else {
            None
        };
        Ok(Self {
            times,
            values,
            uniform_dt,
        })
    }

    pub fn uniform(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| t0 + i as f64 * dt).collect();
        Self::new(times, values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let i = match self.uniform_dt {
            Some(dt) => (((t - self.times[0]) / dt) as usize).min(n - 2),
            None => self.times.partition_point(|&x| x <= t) - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    /// Reads a CSV whose first two columns are time and pressure; a header
    /// line is skipped.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(t), Some(p)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected at least two columns".into(),
                });
            };
            match (t.parse::<f64>(), p.parse::<f64>()) {
                (Ok(t), Ok(p)) => {
                    times.push(t);
                    values.push(p);
                }
                _ if idx == 0 => continue,
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("cannot parse `{line}`"),
                    })
                }
            }
        }
        Self::new(times, values)
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// R fell to or below the configured floor.
    RadiusFloor,
    /// The unclamped step R^λ fell below `dt_min` and halting was requested.
    StepFloor,
    NonFinite,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Completed => "completed",
            Self::RadiusFloor => "radius_floor",
            Self::StepFloor => "step_floor",
            Self::NonFinite => "nonfinite",
        })
    }
}

/// Accepted steps of one bubble integration.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleTrajectory {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    pub velocities: Vec<f64>,
    pub model: ModelKind,
    pub termination: Termination,
    /// Number of accepted steps, stored or not.
    pub steps: u64,
    /// Smallest and largest step taken, ignoring the final step truncated
    /// to land on the end time.
    pub dt_range: (f64, f64),
}

impl BubbleTrajectory {
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        self.radii.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_speed(&self) -> f64 {
        self.velocities.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV with header `t,R,R_t`, 17 significant digits.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "t,R,R_t")?;
        for i in 0..self.times.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                self.times[i], self.radii[i], self.velocities[i]
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Uniformly sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl UniformSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Invalid(format!("series step must be > 0, got {dt}")));
        }
        if values.len() < 2 {
            return Err(Error::TooShort {
                need: 2,
                got: values.len(),
            });
        }
        Ok(Self { t0, dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }
}

/// The adaptive step R^λ (R in metres), unclamped.
pub fn adaptive_dt(radius: f64, lambda: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::NonPositiveRadius(radius));
    }
    if !(lambda > 0.0) {
        return Err(Error::Invalid(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(radius.powf(lambda))
}

/// Radius-adaptive step law with clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub lambda: f64,
    pub dt_min: f64,
    pub dt_max: f64,
}

impl StepControl {
    /// Returns the clamped step and whether the lower clamp was active.
    #[inline]
    pub fn step(&self, radius: f64) -> (f64, bool) {
        let raw = radius.powf(self.lambda);
        if raw < self.dt_min {
            (self.dt_min, true)
        } else {
            (raw.min(self.dt_max), false)
        }
    }
}

/// One classical RK4 step of `x'' = accel(t, x, x')`, written as a first
/// order system in (x, x').
#[inline]
pub fn rk4_step<F>(x: f64, v: f64, t: f64, dt: f64, mut accel: F) -> (f64, f64)
where
    F: FnMut(f64, f64, f64) -> f64,
{
    let h2 = 0.5 * dt;
    let k1x = v;
    let k1v = accel(t, x, v);
    let k2x = v + h2 * k1v;
    let k2v = accel(t + h2, x + h2 * k1x, k2x);
    let k3x = v + h2 * k2v;
    let k3v = accel(t + h2, x + h2 * k2x, k3x);
    let k4x = v + dt * k3v;
    let k4v = accel(t + dt, x + dt * k3x, k4x);
    (
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// RK4 step of a bubble radius model; stage accelerations evaluate the drive
/// at t, t + dt/2 and t + dt.
#[inline]
pub fn rk4_bubble_step(model: &BubbleModel, s: BubbleState, t: f64, dt: f64, drive: &PressureDrive) -> (f64, f64) {
    rk4_step(s.radius, s.velocity, t, dt, |tt, r, v| {
        model.acceleration_raw(r, v, drive.pressure(tt))
    })
}

/// Settings of one bubble integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSettings {
    pub t_final: f64,
    pub control: StepControl,
    pub r_floor: f64,
    pub store_stride: usize,
    /// Stop with [`Termination::StepFloor`] instead of clamping when R^λ
    /// drops below `dt_min`.
    pub halt_at_step_floor: bool,
}

impl OdeSettings {
    pub fn new(t_final: f64, lambda: f64, limits: &OdeLimits) -> Self {
        Self {
            t_final,
            control: StepControl {
                lambda,
                dt_min: limits.dt_min,
                dt_max: limits.dt_max,
            },
            r_floor: limits.r_floor,
            store_stride: limits.store_stride.max(1),
            halt_at_step_floor: false,
        }
    }

    pub fn from_config(cfg: &SimulationConfig) -> Self {
        Self::new(cfg.t_final, cfg.lambda, &cfg.ode)
    }
}

/// Outcome of advancing a radius model over a fixed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalOutcome {
    pub state: BubbleState,
    /// R_tt at the end of the interval.
    pub acceleration: f64,
    pub steps: u64,
    pub termination: Termination,
    pub time: f64,
}

/// Advances a radius model from `t0` to `t1` with adaptive steps, truncating
/// the last step to land exactly on `t1`. Stops early on a guard violation;
/// the returned state is then the last valid one.
pub fn integrate_interval(
    model: &BubbleModel,
    start: BubbleState,
    t0: f64,
    t1: f64,
    drive: &PressureDrive,
    control: &StepControl,
    r_floor: f64,
    max_steps: u64,
) -> IntervalOutcome {
    let mut s = start;
    let mut t = t0;
    let mut steps = 0u64;
    while t < t1 {
        if steps >= max_steps {
            break;
        }
        let (mut dt, _) = control.step(s.radius);
        let last = t + dt >= t1;
        if last {
            dt = t1 - t;
        }
        let (r, v) = rk4_bubble_step(model, s, t, dt, drive);
        if !r.is_finite() || !v.is_finite() {
            return IntervalOutcome {
                state: s,
                acceleration: f64::NAN,
                steps,
                termination: Termination::NonFinite,
                time: t,
            };
        }
        if r <= r_floor {
            return IntervalOutcome {
                state: s,
                acceleration: f64::NAN,
                steps,
                termination: Termination::RadiusFloor,
                time: t,
            };
        }
        s = BubbleState { radius: r, velocity: v };
        t = if last { t1 } else { t + dt };
        steps += 1;
    }
    IntervalOutcome {
        state: s,
        acceleration: model.acceleration_raw(s.radius, s.velocity, drive.pressure(t)),
        steps,
        termination: Termination::Completed,
        time: t,
    }
}

/// Integrates a bubble from rest (R0, 0) to `settings.t_final`.
///
/// Physical blow-up is reported through [`BubbleTrajectory::termination`];
/// only invalid settings are errors.
pub fn simulate_bubble(
    kind: ModelKind,
    params: &PhysicalParams,
    drive: &PressureDrive,
    settings: &OdeSettings,
    nonlinear_volume: bool,
) -> Result<BubbleTrajectory> {
    if !(settings.t_final > 0.0) {
        return Err(Error::Invalid("t_final must be > 0".into()));
    }
    if !(settings.control.lambda > 0.0) {
        return Err(Error::Invalid("lambda must be > 0".into()));
    }
    if let Some(v) = params.validate().into_iter().next() {
        return Err(Error::Invalid(v.to_string()));
    }
    if kind == ModelKind::LinearVolume {
        return Ok(simulate_volume(params, drive, settings, nonlinear_volume));
    }
    let model = BubbleModel::new(kind, params);
    let mut traj = Recorder::new(kind, params.r0, 0.0);
    let mut s = BubbleState::at_rest(params);
    let mut t = 0.0;
    let t_end = settings.t_final;
    while t < t_end {
        let (mut dt, floored) = settings.control.step(s.radius);
        if floored && settings.halt_at_step_floor {
            return Ok(traj.finish(Termination::StepFloor));
        }
        let last = t + dt >= t_end;
        if last {
            dt = t_end - t;
        }
        let (r, v) = rk4_bubble_step(&model, s, t, dt, drive);
        if !r.is_finite() || !v.is_finite() {
            return Ok(traj.finish(Termination::NonFinite));
        }
        if r <= settings.r_floor {
            return Ok(traj.finish(Termination::RadiusFloor));
        }
        s = BubbleState { radius: r, velocity: v };
        t = if last { t_end } else { t + dt };
        traj.accept(t, r, v, dt, last, settings.store_stride);
    }
    Ok(traj.finish(Termination::Completed))
}

/// The volume oscillator integrated for v = V − v0; the stored radius is
/// (3(v0 + v)/(4π))^{1/3} and the velocity v_t/(4πR²).
fn simulate_volume(
    params: &PhysicalParams,
    drive: &PressureDrive,
    settings: &OdeSettings,
    nonlinear: bool,
) -> BubbleTrajectory {
    use std::f64::consts::PI;
    let d = params.derive();
    let mut traj = Recorder::new(ModelKind::LinearVolume, params.r0, 0.0);
    let (mut v, mut vt) = (0.0f64, 0.0f64);
    let mut vtt_prev = 0.0;
    let mut t = 0.0;
    let mut radius = params.r0;
    let t_end = settings.t_final;
    while t < t_end {
        let (mut dt, floored) = settings.control.step(radius);
        if floored && settings.halt_at_step_floor {
            return traj.finish(Termination::StepFloor);
        }
        let last = t + dt >= t_end;
        if last {
            dt = t_end - t;
        }
        let lag = nonlinear.then_some(vtt_prev);
        let (nv, nvt) = rk4_step(v, vt, t, dt, |tt, x, xt| {
            linear_volume_rhs(x, xt, drive.pressure(tt), params, &d, lag)
        });
        if !nv.is_finite() || !nvt.is_finite() {
            return traj.finish(Termination::NonFinite);
        }
        let volume = d.v0 + nv;
        if volume <= 0.0 {
            return traj.finish(Termination::RadiusFloor);
        }
        let r = (3.0 * volume / (4.0 * PI)).cbrt();
        if r <= settings.r_floor {
            return traj.finish(Termination::RadiusFloor);
        }
        t = if last { t_end } else { t + dt };
        vtt_prev = linear_volume_rhs(nv, nvt, drive.pressure(t), params, &d, lag);
        v = nv;
        vt = nvt;
        radius = r;
        traj.accept(t, r, vt / (4.0 * PI * r * r), dt, last, settings.store_stride);
    }
    traj.finish(Termination::Completed)
}

struct Recorder {
    traj: BubbleTrajectory,
    pending: Option<(f64, f64, f64)>,
}

impl Recorder {
    fn new(model: ModelKind, r0: f64, v0: f64) -> Self {
        Self {
            traj: BubbleTrajectory {
                times: vec![0.0],
                radii: vec![r0],
                velocities: vec![v0],
                model,
                termination: Termination::Completed,
                steps: 0,
                dt_range: (f64::INFINITY, 0.0),
            },
            pending: None,
        }
    }

    #[inline]
    fn accept(&mut self, t: f64, r: f64, v: f64, dt: f64, truncated: bool, stride: usize) {
        let tr = &mut self.traj;
        tr.steps += 1;
        if !truncated {
            tr.dt_range.0 = tr.dt_range.0.min(dt);
            tr.dt_range.1 = tr.dt_range.1.max(dt);
        }
        if tr.steps.is_multiple_of(stride as u64) {
            tr.times.push(t);
            tr.radii.push(r);
            tr.velocities.push(v);
            self.pending = None;
        } else {
            self.pending = Some((t, r, v));
        }
    }

    fn finish(mut self, termination: Termination) -> BubbleTrajectory {
        if let Some((t, r, v)) = self.pending.take() {
            self.traj.times.push(t);
            self.traj.radii.push(r);
            self.traj.velocities.push(v);
        }
        if self.traj.dt_range.0 == f64::INFINITY {
            self.traj.dt_range = (0.0, 0.0);
        }
        self.traj.termination = termination;
        self.traj
    }
}

/// Drive of a config: the trace file if given, else the sinusoid.
pub fn drive_from_config(cfg: &SimulationConfig) -> Result<PressureDrive> {
    match &cfg.drive.trace {
        Some(path) => Ok(PressureDrive::Sampled(SampledTrace::read_csv(path)?)),
        None if cfg.drive.amplitude == 0.0 => Ok(PressureDrive::Zero),
        None => Ok(PressureDrive::Sine {
            amplitude: cfg.drive.amplitude,
            frequency: cfg.drive.frequency,
        }),
    }
}

/// Runs the single-bubble experiment described by a config.
pub fn simulate_from_config(cfg: &SimulationConfig) -> Result<BubbleTrajectory> {
    cfg.check()?;
    let drive = drive_from_config(cfg)?;
    simulate_bubble(
        cfg.model,
        &cfg.params,
        &drive,
        &OdeSettings::from_config(cfg),
        cfg.nonlinear_volume,
    )
}

/// Linear interpolation of nonuniform samples onto `n` equispaced points in
/// `[t_start, t_end]`.
pub fn resample(times: &[f64], values: &[f64], t_start: f64, t_end: f64, n: usize) -> Result<UniformSeries> {
    if times.len() < 2 || times.len() != values.len() {
        return Err(Error::TooShort {
            need: 2,
            got: times.len().min(values.len()),
        });
    }
    if n < 2 {
        return Err(Error::TooShort { need: 2, got: n });
    }
    if !(t_end > t_start) {
        return Err(Error::Invalid("resampling window is empty".into()));
    }
    let dt = (t_end - t_start) / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    for i in 0..n {
        let t = if i == n - 1 { t_end } else { t_start + i as f64 * dt };
        while j + 2 < times.len() && times[j + 1] < t {
            j += 1;
        }
        let (t0, t1) = (times[j], times[j + 1]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        out.push(values[j] + w * (values[j + 1] - values[j]));
    }
    UniformSeries::new(t_start, dt, out)
}

/// R(t) resampled onto `n` equispaced times over the whole trajectory.
pub fn resample_uniform(traj: &BubbleTrajectory, n: usize) -> Result<UniformSeries> {
    if traj.times.len() < 2 {
        return Err(Error::TooShort {
            need: 2,
            got: traj.times.len(),
        });
    }
    resample(
        &traj.times,
        &traj.radii,
        traj.times[0],
        traj.times[traj.times.len() - 1],
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(t_final: f64) -> OdeSettings {
        OdeSettings::new(t_final, 1.75, &OdeLimits::default())
    }

    #[test]
    fn adaptive_step_values() {
        let dt = adaptive_dt(2e-6, 1.75).unwrap();
        assert!((dt / 1.064e-10 - 1.0).abs() < 1e-3, "{dt}");
        assert_eq!(adaptive_dt(1.0, 1.75).unwrap(), 1.0);
        assert!(adaptive_dt(0.0, 1.75).is_err());
        assert!(adaptive_dt(1e-6, 0.0).is_err());
        let c = StepControl {
            lambda: 1.75,
            dt_min: 1e-13,
            dt_max: 1e-8,
        };
        assert_eq!(c.step(1.0).0, 1e-8);
        assert_eq!(c.step(1e-9), (1e-13, true));
        // μm-scale bubbles land in the reported range
        for r in [5e-7, 1e-6, 2e-6, 5e-6, 7e-6] {
            let dt = adaptive_dt(r, 1.75).unwrap();
            assert!((1e-12..=1e-9).contains(&dt), "R = {r}: {dt}");
        }
    }

    #[test]
    fn step_law_is_monotone() {
        let mut prev = 0.0;
        for i in 1..200 {
            let r = i as f64 * 1e-7;
            let dt = adaptive_dt(r, 1.75).unwrap();
            assert!(dt >= prev);
            prev = dt;
        }
    }

    #[test]
    fn rk4_zero_rhs_keeps_state() {
        let (x, v) = rk4_step(2.0, 0.0, 0.0, 0.1, |_, _, _| 0.0);
        assert_eq!((x, v), (2.0, 0.0));
        let (x, v) = rk4_step(2.0, 3.0, 0.0, 0.5, |_, _, _| 0.0);
        assert_eq!((x, v), (3.5, 3.0));
    }

    #[test]
    fn rk4_fixed_point_of_rpnnp() {
        let p = PhysicalParams::default();
        let m = BubbleModel::new(ModelKind::Rpnnp, &p);
        let s = BubbleState::at_rest(&p);
        let (r, v) = rk4_bubble_step(&m, s, 0.0, 1e-10, &PressureDrive::Zero);
        assert!((r - p.r0).abs() <= 1e-15 * p.r0);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn rk4_is_fourth_order_on_oscillator() {
        // y'' = −y, y(0) = 1, y'(0) = 0 on [0, 2]; exact cos t.
        let err = |n: usize| {
            let dt = 2.0 / n as f64;
            let (mut x, mut v) = (1.0, 0.0);
            for i in 0..n {
                (x, v) = rk4_step(x, v, i as f64 * dt, dt, |_, y, _| -y);
            }
            (x - 2.0f64.cos()).abs()
        };
        let e1 = err(20);
        let e2 = err(40);
        let order = (e1 / e2).log2();
        assert!((order - 4.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn rk4_is_fourth_order_on_forced_problem() {
        // y'' = −2y' − 2y + sin t ... manufactured: y = e^{-t} sin t + (something)
        // Use y = sin(t)·t², y'' = 2 sin t + 4 t cos t − t² sin t, so
        // accel(t, y, y') = y'' computed from t only plus (y − y_exact) feedback.
        let exact = |t: f64| t * t * t.sin();
        let err = |n: usize| {
            let dt = 1.0 / n as f64;
            let (mut x, mut v) = (0.0, 0.0);
            for i in 0..n {
                (x, v) = rk4_step(x, v, i as f64 * dt, dt, |t, y, _| {
                    2.0 * t.sin() + 4.0 * t * t.cos() - t * t * t.sin() - (y - exact(t))
                });
            }
            (x - exact(1.0)).abs()
        };
        let order = (err(16) / err(32)).log2();
        assert!((order - 4.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn equilibrium_run_stays_at_rest() {
        let p = PhysicalParams::default();
        let traj = simulate_bubble(ModelKind::Rpnnp, &p, &PressureDrive::Zero, &settings(10e-6), false).unwrap();
        assert_eq!(traj.termination, Termination::Completed);
        assert_eq!(*traj.times.last().unwrap(), 10e-6);
        for r in &traj.radii {
            assert!((r - p.r0).abs() <= 1e-9 * p.r0);
        }
    }

    #[test]
    fn trajectory_invariants() {
        let p = PhysicalParams::default();
        let drive = PressureDrive::Sine {
            amplitude: 1e6,
            frequency: 0.5e6,
        };
        let traj = simulate_bubble(ModelKind::RpCoated, &p, &drive, &settings(4e-6), false).unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.times.len(), traj.radii.len());
        assert_eq!(traj.times.len(), traj.velocities.len());
        assert!(traj.radii.iter().all(|&r| r > 0.0));
        let again = simulate_bubble(ModelKind::RpCoated, &p, &drive, &settings(4e-6), false).unwrap();
        assert_eq!(traj, again);
    }

    #[test]
    fn stride_keeps_last_step() {
        let p = PhysicalParams::default();
        let mut s = settings(1e-7);
        s.store_stride = 7;
        let traj = simulate_bubble(ModelKind::RpCoated, &p, &PressureDrive::Zero, &s, false).unwrap();
        assert_eq!(*traj.times.last().unwrap(), 1e-7);
        assert!(traj.times.len() < traj.steps as usize);
    }

    #[test]
    fn volume_oscillator_rings_at_minnaert_frequency() {
        let p = PhysicalParams {
            delta: 0.0,
            ..PhysicalParams::default()
        };
        let f0 = p.derive().omega0 / (2.0 * std::f64::consts::PI);
        // brief push, then free ringing
        let drive = PressureDrive::Ramp {
            t0: 0.0,
            t1: 1e-9,
            p0: 1e3,
            p1: 0.0,
        };
        let traj = simulate_bubble(ModelKind::LinearVolume, &p, &drive, &settings(10.0 / f0), false).unwrap();
        assert_eq!(traj.termination, Termination::Completed);
        // count upward crossings of R0
        let ups: Vec<f64> = traj
            .times
            .windows(2)
            .zip(traj.radii.windows(2))
            .filter(|(_, r)| r[0] < p.r0 && r[1] >= p.r0)
            .map(|(t, _)| t[1])
            .collect();
        assert!(ups.len() >= 5);
        let period = (ups[ups.len() - 1] - ups[0]) / (ups.len() - 1) as f64;
        assert!((1.0 / period / f0 - 1.0).abs() < 1e-2, "{} vs {}", 1.0 / period, f0);
    }

    #[test]
    fn trace_interpolation() {
        let tr = SampledTrace::uniform(0.0, 1.0, vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(tr.at(-1.0), 1.0);
        assert_eq!(tr.at(0.5), 2.0);
        assert_eq!(tr.at(1.5), 2.5);
        assert_eq!(tr.at(9.0), 2.0);
        let nu = SampledTrace::new(vec![0.0, 0.1, 1.0], vec![0.0, 1.0, 10.0]).unwrap();
        assert!((nu.at(0.55) - 5.5).abs() < 1e-12);
        assert!(SampledTrace::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn resample_examples() {
        let traj = BubbleTrajectory {
            times: vec![0.0, 1.0],
            radii: vec![1.0, 3.0],
            velocities: vec![0.0, 0.0],
            model: ModelKind::Rpnnp,
            termination: Termination::Completed,
            steps: 1,
            dt_range: (1.0, 1.0),
        };
        let s = resample_uniform(&traj, 3).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.dt, 0.5);

        let times: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = times.iter().map(|t| t * t).collect();
        let u = resample(&times, &vals, 0.0, 1.0, 11).unwrap();
        for (a, b) in u.values.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }

        let short = BubbleTrajectory {
            times: vec![0.0],
            radii: vec![1.0],
            velocities: vec![0.0],
            ..traj
        };
        assert!(resample_uniform(&short, 4).is_err());
    }

    #[test]
    fn resampled_sinusoid_is_accurate() {
        // Nonuniform samples, ≥ 50 per period, against the analytic curve.
        let f = 3.0;
        let mut times = vec![0.0];
        let mut k = 0u64;
        while *times.last().unwrap() < 2.0 {
            k += 1;
            let jitter = if k.is_multiple_of(3) { 0.6 } else { 1.2 };
            times.push(times.last().unwrap() + jitter / (60.0 * f));
        }
        let vals: Vec<f64> = times.iter().map(|t| (2.0 * std::f64::consts::PI * f * t).sin()).collect();
        let u = resample(&times, &vals, 0.0, 2.0, 1000).unwrap();
        let max_err = (0..u.len())
            .map(|i| (u.values[i] - (2.0 * std::f64::consts::PI * f * u.time(i)).sin()).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 0.01, "{max_err}");
    }
}
