//! Newmark predictor-corrector for
//! `((1 + 2kp) p_t)_t − c²Δp − 𝒜p = f` with strong (`𝒜 = bΔ∂_t`) or
//! time-fractional (`𝒜 = bτ^{α−1}ΔD_t^α`) damping.
//!
//! Neumann data enter the Laplacian through ghost nodes, so the damping term
//! sees the time derivative (strong) or the L1 history (fractional) of the
//! full discrete Laplacian, boundary flux included.

use super::excitation::Excitation;
use super::grid::Grid;
use super::solve::{solve_shifted, SolverWork};
use crate::config::NewmarkSpec;
use crate::error::{Error, Result};
use crate::fractional::FractionalHistory;

/// Attenuation operator with its coefficient resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    /// `b Δ p_t`
    Strong { b: f64 },
    /// `b τ^{α−1} Δ D_t^α p`; α = 1 reduces to the strong form.
    Fractional { b: f64, tau: f64, alpha: f64 },
}

impl Damping {
    /// Coefficient in front of the damping operator.
    pub fn coefficient(&self) -> f64 {
        match *self {
            Self::Strong { b } => b,
            Self::Fractional { b, tau, alpha } => b * tau.powf(alpha - 1.0),
        }
    }

    fn is_memory(&self) -> bool {
        matches!(self, Self::Fractional { alpha, .. } if *alpha < 1.0)
    }
}

/// Nodal state of the wave solver.
#[derive(Debug, Clone)]
pub struct WaveField {
    pub p: Vec<f64>,
    pub p_t: Vec<f64>,
    pub p_tt: Vec<f64>,
    pub k: Vec<f64>,
    /// Past values of the discrete Laplacian (fractional mode only).
    pub history: Option<FractionalHistory>,
    pub t: f64,
    pub step: u64,
}

/// Smallest value of 1 + 2k(x)p(x) over the nodes.
pub fn nondegeneracy_min(field: &WaveField) -> f64 {
    let m = field
        .p
        .iter()
        .zip(&field.k)
        .map(|(p, k)| 1.0 + 2.0 * k * p)
        .fold(f64::INFINITY, f64::min);
    if m.is_finite() {
        m
    } else {
        1.0
    }
}

/// Everything fixed for the duration of a run.
#[derive(Debug, Clone)]
pub struct WaveProblem {
    pub grid: Grid,
    pub excitation: Option<Excitation>,
    pub c: f64,
    pub k: Vec<f64>,
    pub damping: Damping,
    pub newmark: NewmarkSpec,
    pub gamma_floor: f64,
    pub dt: f64,
}

/// Counters kept across steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitors {
    /// Smallest 1 + 2kp seen on any accepted step (including t = 0).
    pub gamma_min: f64,
    pub max_corrector_iterations: usize,
    pub total_corrector_iterations: u64,
}

#[derive(Debug, Clone)]
pub struct WaveStepper {
    problem: WaveProblem,
    field: WaveField,
    monitors: Monitors,
    work: SolverWork,
    linear: bool,
    // scratch
    p_pred: Vec<f64>,
    v_pred: Vec<f64>,
    lap_p: Vec<f64>,
    lap_v: Vec<f64>,
    base: Vec<f64>,
    rhs: Vec<f64>,
    mass: Vec<f64>,
    a_new: Vec<f64>,
    a_guess: Vec<f64>,
    memory: Vec<f64>,
}

/// Discrete Laplacian of `p` at time `t` including the boundary flux.
fn full_laplacian(pr: &WaveProblem, p: &[f64], t: f64, out: &mut [f64]) {
    pr.grid.laplacian_unchecked(p, out);
    if let Some(e) = &pr.excitation {
        e.add_flux(&pr.grid, t, 1.0, false, out);
    }
}

impl WaveStepper {
    /// Starts from `p0`, `p1 = p_t(0)` and forcing `f0` at t = 0 (zero if
    /// `None`); the initial acceleration solves the equation at t = 0.
    pub fn new(problem: WaveProblem, p0: Vec<f64>, p1: Vec<f64>, f0: Option<&[f64]>) -> Result<Self> {
        let n = problem.grid.len();
        for v in [&p0, &p1, &problem.k] {
            if v.len() != n {
                return Err(Error::SizeMismatch { expected: n, got: v.len() });
            }
        }
        if let Some(f) = f0 {
            if f.len() != n {
                return Err(Error::SizeMismatch { expected: n, got: f.len() });
            }
        }
        if !(problem.dt > 0.0) {
            return Err(Error::Invalid(format!("wave time step must be > 0, got {}", problem.dt)));
        }
        if !(problem.c > 0.0) {
            return Err(Error::Invalid("c must be > 0".into()));
        }
        if let Damping::Fractional { alpha, tau, .. } = problem.damping {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::Invalid(format!("alpha must be in (0, 1], got {alpha}")));
            }
            if !(tau > 0.0) {
                return Err(Error::Invalid("tau must be > 0".into()));
            }
        }
        let linear = problem.k.iter().all(|&k| k == 0.0);
        let mut s = Self {
            field: WaveField {
                p: p0,
                p_t: p1,
                p_tt: vec![0.0; n],
                k: problem.k.clone(),
                history: None,
                t: 0.0,
                step: 0,
            },
            problem,
            monitors: Monitors {
                gamma_min: 1.0,
                max_corrector_iterations: 0,
                total_corrector_iterations: 0,
            },
            work: SolverWork::default(),
            linear,
            p_pred: vec![0.0; n],
            v_pred: vec![0.0; n],
            lap_p: vec![0.0; n],
            lap_v: vec![0.0; n],
            base: vec![0.0; n],
            rhs: vec![0.0; n],
            mass: vec![0.0; n],
            a_new: vec![0.0; n],
            a_guess: vec![0.0; n],
            memory: vec![0.0; n],
        };
        for k in 0..n {
            if !s.problem.grid.is_free(k) {
                s.field.p[k] = 0.0;
                s.field.p_t[k] = 0.0;
            }
        }
        s.check_state(0.0)?;
        s.initial_acceleration(f0)?;
        Ok(s)
    }

    pub fn problem(&self) -> &WaveProblem {
        &self.problem
    }

    pub fn field(&self) -> &WaveField {
        &self.field
    }

    pub fn monitors(&self) -> Monitors {
        self.monitors
    }

    pub fn time(&self) -> f64 {
        self.field.t
    }

    fn initial_acceleration(&mut self, f0: Option<&[f64]>) -> Result<()> {
        let n = self.problem.grid.len();
        let c2 = self.problem.c * self.problem.c;
        let mut lap_p = vec![0.0; n];
        full_laplacian(&self.problem, &self.field.p, 0.0, &mut lap_p);
        let mut rhs: Vec<f64> = lap_p.iter().map(|l| c2 * l).collect();
        match self.problem.damping {
            d if d.is_memory() => {
                let Damping::Fractional { alpha, .. } = d else { unreachable!() };
                let mut h = FractionalHistory::new(alpha, self.problem.dt, n)?;
                h.push(&lap_p)?;
                self.field.history = Some(h);
            }
            d => {
                let mut lap_v = vec![0.0; n];
                self.problem.grid.laplacian_unchecked(&self.field.p_t, &mut lap_v);
                if let Some(e) = &self.problem.excitation {
                    e.add_flux(&self.problem.grid, 0.0, 1.0, true, &mut lap_v);
                }
                let b = d.coefficient();
                for k in 0..n {
                    rhs[k] += b * lap_v[k];
                }
            }
        }
        for k in 0..n {
            if !self.problem.grid.is_free(k) {
                self.field.p_tt[k] = 0.0;
                continue;
            }
            let f = f0.map_or(0.0, |f| f[k]);
            let (p, v, kk) = (self.field.p[k], self.field.p_t[k], self.field.k[k]);
            self.field.p_tt[k] = (rhs[k] + f - 2.0 * kk * v * v) / (1.0 + 2.0 * kk * p);
        }
        Ok(())
    }

    fn check_state(&mut self, t: f64) -> Result<()> {
        let floor = self.problem.gamma_floor;
        let f = &self.field;
        for k in 0..f.p.len() {
            let (p, v) = (f.p[k], f.p_t[k]);
            if !p.is_finite() || !v.is_finite() || !f.p_tt[k].is_finite() {
                return Err(Error::NonFinite { node: k, time: t });
            }
            let g = 1.0 + 2.0 * f.k[k] * p;
            if g < floor {
                return Err(Error::Degenerate {
                    node: k,
                    time: t,
                    value: g,
                    floor,
                });
            }
            self.monitors.gamma_min = self.monitors.gamma_min.min(g);
        }
        Ok(())
    }

    /// Advances one step. `forcing` holds f at the new time level.
    pub fn step(&mut self, forcing: Option<&[f64]>) -> Result<()> {
        let n = self.problem.grid.len();
        if let Some(f) = forcing {
            if f.len() != n {
                return Err(Error::SizeMismatch { expected: n, got: f.len() });
            }
        }
        let dt = self.problem.dt;
        let NewmarkSpec {
            gamma,
            beta,
            tol,
            max_iters,
        } = self.problem.newmark;
        let t1 = (self.field.step + 1) as f64 * dt;
        let c2 = self.problem.c * self.problem.c;
        let free: Vec<bool> = (0..n).map(|k| self.problem.grid.is_free(k)).collect();

        // predictors
        {
            let f = &self.field;
            for k in 0..n {
                self.p_pred[k] = f.p[k] + dt * f.p_t[k] + dt * dt * (0.5 - beta) * f.p_tt[k];
                self.v_pred[k] = f.p_t[k] + dt * (1.0 - gamma) * f.p_tt[k];
            }
        }

        // part of the right-hand side that does not depend on the iterate;
        // `shift` multiplies L in the operator m − shift·L
        let shift;
        full_laplacian(&self.problem, &self.p_pred, t1, &mut self.lap_p);
        match self.problem.damping {
            d if d.is_memory() => {
                let eps = d.coefficient();
                let h = self.field.history.as_mut().expect("fractional history");
                let sigma = h.scale();
                h.memory(&mut self.memory)?;
                let last = h.sample(h.len() - 1);
                let w = c2 + eps * sigma;
                for k in 0..n {
                    self.base[k] = w * self.lap_p[k] - eps * sigma * last[k] + eps * self.memory[k];
                }
                shift = w * beta * dt * dt;
            }
            d => {
                let b = d.coefficient();
                self.problem.grid.laplacian_unchecked(&self.v_pred, &mut self.lap_v);
                if let Some(e) = &self.problem.excitation {
                    e.add_flux(&self.problem.grid, t1, 1.0, true, &mut self.lap_v);
                }
                for k in 0..n {
                    self.base[k] = c2 * self.lap_p[k] + b * self.lap_v[k];
                }
                shift = c2 * beta * dt * dt + b * gamma * dt;
            }
        }
        if let Some(f) = forcing {
            for k in 0..n {
                self.base[k] += f[k];
            }
        }

        // corrector iterations on the mass factor and the 2k p_t² term
        self.a_new.copy_from_slice(&self.field.p_tt);
        let mut iterations = 0;
        loop {
            iterations += 1;
            let k_field = &self.field.k;
            for k in 0..n {
                if !free[k] {
                    self.mass[k] = 1.0;
                    self.rhs[k] = 0.0;
                    continue;
                }
                let a = self.a_new[k];
                let p = self.p_pred[k] + beta * dt * dt * a;
                let v = self.v_pred[k] + gamma * dt * a;
                let m = 1.0 + 2.0 * k_field[k] * p;
                if !(m >= self.problem.gamma_floor) {
                    if !m.is_finite() {
                        return Err(Error::NonFinite { node: k, time: t1 });
                    }
                    return Err(Error::Degenerate {
                        node: k,
                        time: t1,
                        value: m,
                        floor: self.problem.gamma_floor,
                    });
                }
                // Newton on the pointwise nonlinearity m(a)·a + 2k v(a)²;
                // falls back to the plain mass factor if the slope is small
                let kk = k_field[k];
                let jac = m + 2.0 * kk * beta * dt * dt * a + 4.0 * kk * gamma * dt * v;
                let d = if jac >= 0.5 * m { jac } else { m };
                self.mass[k] = d;
                self.rhs[k] = self.base[k] - 2.0 * kk * v * v + (d - m) * a;
            }
            self.a_guess.copy_from_slice(&self.a_new);
            solve_shifted(&self.problem.grid, &self.mass, shift, &self.rhs, &mut self.a_new, &mut self.work);
            if self.linear {
                break;
            }
            let mut diff = 0.0f64;
            let mut size = 0.0f64;
            for k in 0..n {
                diff = diff.max((self.a_new[k] - self.a_guess[k]).abs());
                size = size.max(self.a_new[k].abs());
            }
            if !diff.is_finite() {
                let node = (0..n).find(|&k| !self.a_new[k].is_finite()).unwrap_or(0);
                return Err(Error::NonFinite { node, time: t1 });
            }
            let change = if size > 0.0 { diff / size } else { diff };
            if change <= tol {
                break;
            }
            if iterations >= max_iters {
                return Err(Error::CorrectorDiverged {
                    time: t1,
                    iterations,
                    change,
                });
            }
        }

        // correctors
        {
            let f = &mut self.field;
            for k in 0..n {
                if free[k] {
                    let a = self.a_new[k];
                    f.p[k] = self.p_pred[k] + beta * dt * dt * a;
                    f.p_t[k] = self.v_pred[k] + gamma * dt * a;
                    f.p_tt[k] = a;
                } else {
                    f.p[k] = 0.0;
                    f.p_t[k] = 0.0;
                    f.p_tt[k] = 0.0;
                }
            }
            f.t = t1;
            f.step += 1;
        }
        if let Some(history) = self.field.history.as_mut() {
            full_laplacian(&self.problem, &self.field.p, t1, &mut self.lap_p);
            history.push(&self.lap_p)?;
        }
        self.monitors.max_corrector_iterations = self.monitors.max_corrector_iterations.max(iterations);
        self.monitors.total_corrector_iterations += iterations as u64;
        self.check_state(t1)
    }
}
