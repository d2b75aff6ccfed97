//! Physical parameters, derived constants and the flat `key = value`
//! configuration format shared by every solver.
//!
//! All quantities are SI base units internally. Values in a config file may
//! carry a unit suffix (`15MPa`, `0.5MHz`, `2um`), see [`crate::units`].

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bubble::ModelKind;
use crate::error::{Error, Result};
use crate::units::parse_quantity;

/// Nonlinearity coefficient `k(x)` of the wave equation (1/Pa).
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearityCoefficient {
    Constant(f64),
    /// CSV with columns `x,k` (1D) or `x,y,k` (2D); every grid node takes the
    /// value of the nearest listed point.
    Profile(PathBuf),
}

/// Medium, bubble and shell constants.
///
/// `Default` is the parameter table used for every single-bubble and wave
/// experiment (R0 = 2 μm); entries the table leaves open (`b`, `k`, `alpha`,
/// `tau`, `n0`, `rho0`, `sigma0`, `delta`) have documented defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Mass density of the mixture (kg/m³).
    pub rho: f64,
    /// Shear viscosity (Pa·s).
    pub mu: f64,
    /// Constant surface tension (N/m).
    pub sigma: f64,
    /// Shell elasticity (N/m).
    pub chi: f64,
    /// Adiabatic exponent.
    pub kappa: f64,
    /// Shell viscosity (kg/s).
    pub kappa_s: f64,
    /// Speed of sound (m/s).
    pub c: f64,
    /// Vapor pressure (Pa).
    pub p_v: f64,
    /// Static ambient pressure (Pa).
    pub p_stat: f64,
    /// Surface tension of a coated bubble at rest (N/m).
    pub sigma0: f64,
    /// Equilibrium radius (m).
    pub r0: f64,
    /// Sound diffusivity (m²/s).
    pub b: f64,
    pub k: NonlinearityCoefficient,
    /// Fractional damping order, in (0, 1].
    pub alpha: f64,
    /// Relaxation time of the fractional damping (s).
    pub tau: f64,
    /// Bubble number density (1/m³).
    pub n0: f64,
    /// Ambient mixture density (kg/m³).
    pub rho0: f64,
    /// Damping switch of the volume oscillator.
    pub delta: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            rho: 1000.0,
            mu: 8.9e-3,
            sigma: 72.8e-3,
            chi: 2.0,
            kappa: 1.4,
            kappa_s: 2e-6,
            c: 1500.0,
            p_v: 2330.0,
            p_stat: 100e3,
            sigma0: 0.0,
            r0: 2e-6,
            b: 6e-9,
            k: NonlinearityCoefficient::Constant(1.556e-9),
            alpha: 0.5,
            tau: 1e-12,
            n0: 1e14,
            rho0: 1000.0,
            delta: 1.0,
        }
    }
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub value: f64,
    pub constraint: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} must be {} (got {})", self.field, self.constraint, self.value)
    }
}

impl PhysicalParams {
    /// Lists every violated invariant; empty when the parameters are valid.
    pub fn validate(&self) -> Vec<Violation> {
        let checks: [(&'static str, f64, &'static str, bool); 11] = [
            ("rho", self.rho, "> 0", self.rho > 0.0),
            ("c", self.c, "> 0", self.c > 0.0),
            ("r0", self.r0, "> 0", self.r0 > 0.0),
            ("mu", self.mu, "≥ 0", self.mu >= 0.0),
            ("b", self.b, "≥ 0", self.b >= 0.0),
            ("tau", self.tau, "> 0", self.tau > 0.0),
            ("alpha", self.alpha, "in (0, 1]", self.alpha > 0.0 && self.alpha <= 1.0),
            ("kappa", self.kappa, "≥ 1", self.kappa >= 1.0),
            ("rho0", self.rho0, "> 0", self.rho0 > 0.0),
            ("n0", self.n0, "≥ 0", self.n0 >= 0.0),
            ("kappa_s", self.kappa_s, "≥ 0", self.kappa_s >= 0.0),
        ];
        let mut out: Vec<Violation> = checks
            .into_iter()
            .filter(|(_, _, _, ok)| !ok)
            .map(|(field, value, constraint, _)| Violation {
                field,
                value,
                constraint,
            })
            .collect();
        if let NonlinearityCoefficient::Constant(k) = self.k {
            if !k.is_finite() {
                out.push(Violation {
                    field: "k",
                    value: k,
                    constraint: "finite",
                });
            }
        }
        out
    }

    /// Constant value of `k`, or `None` for a spatial profile.
    pub fn k_constant(&self) -> Option<f64> {
        match self.k {
            NonlinearityCoefficient::Constant(k) => Some(k),
            NonlinearityCoefficient::Profile(_) => None,
        }
    }

    pub fn derive(&self) -> DerivedParams {
        DerivedParams::from_params(self)
    }
}

/// Closed-form quantities computed from [`PhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// p_v − p_stat (Pa).
    pub p_b: f64,
    /// Gas pressure at rest of an uncoated bubble, 2σ/R0 − p_b (Pa).
    pub p_pgn_uncoated: f64,
    /// Gas pressure at rest of a coated bubble, 2σ0/R0 − p_b (Pa).
    pub p_pgn_coated: f64,
    /// Minnaert angular frequency (rad/s), ω0² = 3κ p_stat / (ρ0 R0²).
    pub omega0: f64,
    /// ρ0 n0 (kg/m⁶).
    pub eta: f64,
    /// Coupling constant (4/3) π c² η of the bubble source term.
    pub xi: f64,
    /// Equilibrium bubble volume (m³).
    pub v0: f64,
}

impl DerivedParams {
    pub fn from_params(p: &PhysicalParams) -> Self {
        let p_b = p.p_v - p.p_stat;
        let eta = p.rho0 * p.n0;
        Self {
            p_b,
            p_pgn_uncoated: 2.0 * p.sigma / p.r0 - p_b,
            p_pgn_coated: 2.0 * p.sigma0 / p.r0 - p_b,
            omega0: (3.0 * p.kappa * p.p_stat / (p.rho0 * p.r0 * p.r0)).sqrt(),
            eta,
            xi: 4.0 / 3.0 * std::f64::consts::PI * p.c * p.c * eta,
            v0: 4.0 / 3.0 * std::f64::consts::PI * p.r0.powi(3),
        }
    }
}

/// Free-function form of [`PhysicalParams::derive`].
pub fn derive(params: &PhysicalParams) -> DerivedParams {
    DerivedParams::from_params(params)
}

/// Free-function form of [`PhysicalParams::validate`].
pub fn validate(params: &PhysicalParams) -> Vec<Violation> {
    params.validate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attenuation {
    Strong,
    Fractional,
}

impl FromStr for Attenuation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strong" => Ok(Self::Strong),
            "fractional" => Ok(Self::Fractional),
            _ => Err(format!("attenuation must be `strong` or `fractional`, got `{s}`")),
        }
    }
}

impl fmt::Display for Attenuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strong => "strong",
            Self::Fractional => "fractional",
        })
    }
}

/// Boundary condition applied along one side of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideCondition {
    Dirichlet,
    Neumann,
}

impl FromStr for SideCondition {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "neumann" => Ok(Self::Neumann),
            _ => Err(format!("boundary must be `dirichlet` or `neumann`, got `{s}`")),
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        })
    }
}

/// Sinusoidal driving pressure `A sin(2π f t)` or a recorded `t,p` trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    pub amplitude: f64,
    pub frequency: f64,
    pub trace: Option<PathBuf>,
}

/// Limits of the radius-adaptive ODE integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeLimits {
    pub dt_min: f64,
    pub dt_max: f64,
    pub r_floor: f64,
    /// Store every n-th accepted step (the last step is always stored).
    pub store_stride: usize,
}

impl Default for OdeLimits {
    fn default() -> Self {
        Self {
            dt_min: 1e-13,
            dt_max: 1e-8,
            r_floor: 1e-9,
            store_stride: 1,
        }
    }
}

/// Structured grid and excitation of the wave solver.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSpec {
    /// 1 or 2.
    pub dim: usize,
    /// Extents along x and y (m); `extent[1]` is ignored in 1D.
    pub extent: [f64; 2],
    /// Node counts along x and y; `nodes[1]` is ignored in 1D.
    pub nodes: [usize; 2],
    /// Side conditions in the order left, right, bottom, top.
    pub sides: [SideCondition; 4],
    /// Excited `y` interval on the left side (the whole left end in 1D);
    /// `None` disables the excitation.
    pub excite: Option<[f64; 2]>,
    /// Focus point for the per-node excitation delays.
    pub focus: Option<[f64; 2]>,
    /// Amplitude of the normal-derivative excitation (Pa/m).
    pub a_p: f64,
    /// Excitation frequency (Hz).
    pub f_p: f64,
    /// Time step (s); `None` selects 0.5·h/c.
    pub dt: Option<f64>,
    pub t_final: f64,
    /// Number of full-field snapshots to write (0 disables).
    pub snapshots: usize,
}

impl Default for WaveSpec {
    fn default() -> Self {
        Self {
            dim: 2,
            extent: [0.3, 0.4],
            nodes: [121, 161],
            sides: [
                SideCondition::Neumann,
                SideCondition::Dirichlet,
                SideCondition::Dirichlet,
                SideCondition::Dirichlet,
            ],
            excite: Some([0.02, 0.38]),
            focus: Some([0.15, 0.2]),
            a_p: 0.1e6,
            f_p: 15e3,
            dt: None,
            t_final: 2.6e-4,
            snapshots: 0,
        }
    }
}

/// Newmark parameters (γ_N, β_N) and corrector controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewmarkSpec {
    pub gamma: f64,
    pub beta: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for NewmarkSpec {
    fn default() -> Self {
        Self {
            gamma: 0.7,
            beta: 0.4,
            tol: 1e-10,
            max_iters: 20,
        }
    }
}

impl NewmarkSpec {
    /// Average-acceleration parameters (γ_N, β_N) = (1/2, 1/4); second order
    /// and energy conserving.
    pub fn trapezoidal() -> Self {
        Self {
            gamma: 0.5,
            beta: 0.25,
            ..Self::default()
        }
    }
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: PhysicalParams,
    pub model: ModelKind,
    pub drive: DriveSpec,
    /// Final time of the bubble integration (s).
    pub t_final: f64,
    /// Adaptive time index λ in dt = R^λ.
    pub lambda: f64,
    pub ode: OdeLimits,
    /// Keep the lagged nonlinear terms of the volume oscillator.
    pub nonlinear_volume: bool,
    pub wave: WaveSpec,
    pub attenuation: Attenuation,
    pub newmark: NewmarkSpec,
    /// Floor for the monitor of 1 + 2kp.
    pub gamma_floor: f64,
    /// Overrides the derived coupling constant.
    pub xi: Option<f64>,
    /// Coupled-node lattice stride in 2D.
    pub coupled_stride: usize,
    /// Probe coordinates (x, y); `y` is ignored in 1D.
    pub probes: Vec<[f64; 2]>,
    pub out_dir: PathBuf,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::default(),
            model: ModelKind::RpCoated,
            drive: DriveSpec {
                amplitude: 1e6,
                frequency: 0.5e6,
                trace: None,
            },
            t_final: 20e-6,
            lambda: 1.75,
            ode: OdeLimits::default(),
            nonlinear_volume: false,
            wave: WaveSpec::default(),
            attenuation: Attenuation::Strong,
            newmark: NewmarkSpec::default(),
            gamma_floor: 0.1,
            xi: None,
            coupled_stride: 10,
            probes: vec![[0.01, 0.2], [0.15, 0.2]],
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Canonical keys accepted in config files, in serialization order.
pub const KEYS: &[&str] = &[
    "rho",
    "mu",
    "sigma",
    "chi",
    "kappa",
    "kappa_s",
    "c",
    "p_v",
    "p_stat",
    "sigma0",
    "r0",
    "b",
    "k",
    "k_profile",
    "alpha",
    "tau",
    "n0",
    "rho0",
    "delta",
    "model",
    "amplitude",
    "frequency",
    "drive_trace",
    "t_final",
    "lambda",
    "dt_min",
    "dt_max",
    "r_floor",
    "store_stride",
    "nonlinear_volume",
    "dim",
    "lx",
    "ly",
    "nx",
    "ny",
    "bc_left",
    "bc_right",
    "bc_bottom",
    "bc_top",
    "excite",
    "focus",
    "a_p",
    "f_p",
    "wave_dt",
    "wave_t_final",
    "snapshots",
    "attenuation",
    "newmark_gamma",
    "newmark_beta",
    "newmark_tol",
    "newmark_max_iters",
    "gamma_floor",
    "xi",
    "coupled_stride",
    "probes",
    "out_dir",
];

/// Maps accepted aliases (symbols used on the command line) to canonical keys.
pub fn canonical_key(key: &str) -> Option<&'static str> {
    let alias = match key {
        "R0" => "r0",
        "A" => "amplitude",
        "f" => "frequency",
        "T" => "t_final",
        "A_p" => "a_p",
        "f_p" => "f_p",
        "kappa0" => "kappa",
        other => other,
    };
    KEYS.iter().copied().find(|k| *k == alias)
}

fn parse_usize(v: &str) -> std::result::Result<usize, String> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| format!("`{v}` is not a non-negative integer"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("`{v}` is not a boolean")),
    }
}

fn parse_pair(v: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x] => Ok([parse_quantity(x)?, 0.0]),
        [x, y] => Ok([parse_quantity(x)?, parse_quantity(y)?]),
        _ => Err(format!("`{v}` is not a point `x[,y]`")),
    }
}

fn parse_optional_pair(v: &str) -> std::result::Result<Option<[f64; 2]>, String> {
    if v.trim() == "none" {
        Ok(None)
    } else {
        parse_pair(v).map(Some)
    }
}

fn parse_auto(v: &str) -> std::result::Result<Option<f64>, String> {
    if v.trim() == "auto" {
        Ok(None)
    } else {
        parse_quantity(v).map(Some)
    }
}

impl SimulationConfig {
    /// Applies one `key = value` assignment. Accepts aliases such as `A`,
    /// `f`, `T`, `R0`.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let canonical = canonical_key(key).ok_or_else(|| format!("unknown key `{key}`"))?;
        let q = || parse_quantity(value);
        let p = &mut self.params;
        match canonical {
            "rho" => p.rho = q()?,
            "mu" => p.mu = q()?,
            "sigma" => p.sigma = q()?,
            "chi" => p.chi = q()?,
            "kappa" => p.kappa = q()?,
            "kappa_s" => p.kappa_s = q()?,
            "c" => p.c = q()?,
            "p_v" => p.p_v = q()?,
            "p_stat" => p.p_stat = q()?,
            "sigma0" => p.sigma0 = q()?,
            "r0" => p.r0 = q()?,
            "b" => p.b = q()?,
            "k" => p.k = NonlinearityCoefficient::Constant(q()?),
            "k_profile" => {
                p.k = NonlinearityCoefficient::Profile(PathBuf::from(value.trim()));
            }
            "alpha" => p.alpha = q()?,
            "tau" => p.tau = q()?,
            "n0" => p.n0 = q()?,
            "rho0" => p.rho0 = q()?,
            "delta" => p.delta = q()?,
            "model" => self.model = value.trim().parse()?,
            "amplitude" => self.drive.amplitude = q()?,
            "frequency" => self.drive.frequency = q()?,
            "drive_trace" => {
                self.drive.trace = match value.trim() {
                    "none" | "" => None,
                    path => Some(PathBuf::from(path)),
                }
            }
            "t_final" => self.t_final = q()?,
            "lambda" => self.lambda = q()?,
            "dt_min" => self.ode.dt_min = q()?,
            "dt_max" => self.ode.dt_max = q()?,
            "r_floor" => self.ode.r_floor = q()?,
            "store_stride" => self.ode.store_stride = parse_usize(value)?,
            "nonlinear_volume" => self.nonlinear_volume = parse_bool(value)?,
            "dim" => self.wave.dim = parse_usize(value)?,
            "lx" => self.wave.extent[0] = q()?,
            "ly" => self.wave.extent[1] = q()?,
            "nx" => self.wave.nodes[0] = parse_usize(value)?,
            "ny" => self.wave.nodes[1] = parse_usize(value)?,
            "bc_left" => self.wave.sides[0] = value.trim().parse()?,
            "bc_right" => self.wave.sides[1] = value.trim().parse()?,
            "bc_bottom" => self.wave.sides[2] = value.trim().parse()?,
            "bc_top" => self.wave.sides[3] = value.trim().parse()?,
            "excite" => self.wave.excite = parse_optional_pair(value)?,
            "focus" => self.wave.focus = parse_optional_pair(value)?,
            "a_p" => self.wave.a_p = q()?,
            "f_p" => self.wave.f_p = q()?,
            "wave_dt" => self.wave.dt = parse_auto(value)?,
            "wave_t_final" => self.wave.t_final = q()?,
            "snapshots" => self.wave.snapshots = parse_usize(value)?,
            "attenuation" => self.attenuation = value.trim().parse()?,
            "newmark_gamma" => self.newmark.gamma = q()?,
            "newmark_beta" => self.newmark.beta = q()?,
            "newmark_tol" => self.newmark.tol = q()?,
            "newmark_max_iters" => self.newmark.max_iters = parse_usize(value)?,
            "gamma_floor" => self.gamma_floor = q()?,
            "xi" => self.xi = parse_auto(value)?,
            "coupled_stride" => self.coupled_stride = parse_usize(value)?,
            "probes" => {
                self.probes = value
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(parse_pair)
                    .collect::<std::result::Result<_, _>>()?;
            }
            "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            _ => unreachable!("key list and match arms out of sync: {canonical}"),
        }
        Ok(())
    }

    /// Parses config text on top of the defaults, then validates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            if canonical_key(key).is_none() {
                return Err(Error::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            cfg.set(key, value.trim())
                .map_err(|message| Error::Parse { line, message })?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    /// Checks physical and run-control invariants; the error names the first
    /// violated one.
    pub fn check(&self) -> Result<()> {
        if let Some(v) = self.params.validate().into_iter().next() {
            return Err(Error::Invalid(v.to_string()));
        }
        let run_checks = [
            (self.lambda > 0.0, "lambda must be > 0"),
            (self.t_final > 0.0, "t_final must be > 0"),
            (self.wave.t_final > 0.0, "wave_t_final must be > 0"),
            (self.wave.dim == 1 || self.wave.dim == 2, "dim must be 1 or 2"),
            (self.wave.nodes[0] >= 3, "nx must be ≥ 3"),
            (self.wave.dim == 1 || self.wave.nodes[1] >= 3, "ny must be ≥ 3"),
            (self.wave.extent[0] > 0.0, "lx must be > 0"),
            (self.wave.dim == 1 || self.wave.extent[1] > 0.0, "ly must be > 0"),
            (self.wave.dt.is_none_or(|dt| dt > 0.0), "wave_dt must be > 0"),
            (self.ode.dt_min > 0.0 && self.ode.dt_min <= self.ode.dt_max, "dt_min must be in (0, dt_max]"),
            (self.ode.r_floor > 0.0, "r_floor must be > 0"),
            (self.ode.store_stride >= 1, "store_stride must be ≥ 1"),
            (self.newmark.gamma > 0.0 && self.newmark.beta > 0.0, "newmark_gamma and newmark_beta must be > 0"),
            (self.newmark.max_iters >= 1, "newmark_max_iters must be ≥ 1"),
            (self.gamma_floor > 0.0, "gamma_floor must be > 0"),
            (self.coupled_stride >= 1, "coupled_stride must be ≥ 1"),
            (self.drive.frequency >= 0.0, "frequency must be ≥ 0"),
        ];
        match run_checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Invalid(msg.to_string())),
            None => Ok(()),
        }
    }

    /// Number of nodes of the configured grid.
    pub fn node_count(&self) -> usize {
        if self.wave.dim == 1 {
            self.wave.nodes[0]
        } else {
            self.wave.nodes[0] * self.wave.nodes[1]
        }
    }

    /// Coupling constant: the override if set, otherwise (4/3) π c² ρ0 n0.
    pub fn xi(&self) -> f64 {
        self.xi.unwrap_or_else(|| self.params.derive().xi)
    }
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<SimulationConfig> {
    let text = fs::read_to_string(path)?;
    SimulationConfig::parse(&text)
}

fn fmt_pair(p: Option<[f64; 2]>) -> String {
    match p {
        Some([x, y]) => format!("{x:?},{y:?}"),
        None => "none".to_string(),
    }
}

/// Serializes every field; [`SimulationConfig::parse`] reads it back exactly.
impl fmt::Display for SimulationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let w = &self.wave;
        let pairs: Vec<(&str, String)> = vec![
            ("rho", format!("{:?}", p.rho)),
            ("mu", format!("{:?}", p.mu)),
            ("sigma", format!("{:?}", p.sigma)),
            ("chi", format!("{:?}", p.chi)),
            ("kappa", format!("{:?}", p.kappa)),
            ("kappa_s", format!("{:?}", p.kappa_s)),
            ("c", format!("{:?}", p.c)),
            ("p_v", format!("{:?}", p.p_v)),
            ("p_stat", format!("{:?}", p.p_stat)),
            ("sigma0", format!("{:?}", p.sigma0)),
            ("r0", format!("{:?}", p.r0)),
            ("b", format!("{:?}", p.b)),
            match &p.k {
                NonlinearityCoefficient::Constant(k) => ("k", format!("{k:?}")),
                NonlinearityCoefficient::Profile(path) => ("k_profile", path.display().to_string()),
            },
            ("alpha", format!("{:?}", p.alpha)),
            ("tau", format!("{:?}", p.tau)),
            ("n0", format!("{:?}", p.n0)),
            ("rho0", format!("{:?}", p.rho0)),
            ("delta", format!("{:?}", p.delta)),
            ("model", self.model.to_string()),
            ("amplitude", format!("{:?}", self.drive.amplitude)),
            ("frequency", format!("{:?}", self.drive.frequency)),
            (
                "drive_trace",
                self.drive
                    .trace
                    .as_ref()
                    .map_or("none".to_string(), |t| t.display().to_string()),
            ),
            ("t_final", format!("{:?}", self.t_final)),
            ("lambda", format!("{:?}", self.lambda)),
            ("dt_min", format!("{:?}", self.ode.dt_min)),
            ("dt_max", format!("{:?}", self.ode.dt_max)),
            ("r_floor", format!("{:?}", self.ode.r_floor)),
            ("store_stride", self.ode.store_stride.to_string()),
            ("nonlinear_volume", self.nonlinear_volume.to_string()),
            ("dim", w.dim.to_string()),
            ("lx", format!("{:?}", w.extent[0])),
            ("ly", format!("{:?}", w.extent[1])),
            ("nx", w.nodes[0].to_string()),
            ("ny", w.nodes[1].to_string()),
            ("bc_left", w.sides[0].to_string()),
            ("bc_right", w.sides[1].to_string()),
            ("bc_bottom", w.sides[2].to_string()),
            ("bc_top", w.sides[3].to_string()),
            ("excite", fmt_pair(w.excite)),
            ("focus", fmt_pair(w.focus)),
            ("a_p", format!("{:?}", w.a_p)),
            ("f_p", format!("{:?}", w.f_p)),
            ("wave_dt", w.dt.map_or("auto".to_string(), |d| format!("{d:?}"))),
            ("wave_t_final", format!("{:?}", w.t_final)),
            ("snapshots", w.snapshots.to_string()),
            ("attenuation", self.attenuation.to_string()),
            ("newmark_gamma", format!("{:?}", self.newmark.gamma)),
            ("newmark_beta", format!("{:?}", self.newmark.beta)),
            ("newmark_tol", format!("{:?}", self.newmark.tol)),
            ("newmark_max_iters", self.newmark.max_iters.to_string()),
            ("gamma_floor", format!("{:?}", self.gamma_floor)),
            ("xi", self.xi.map_or("auto".to_string(), |x| format!("{x:?}"))),
            ("coupled_stride", self.coupled_stride.to_string()),
            (
                "probes",
                self.probes
                    .iter()
                    .map(|[x, y]| format!("{x:?},{y:?}"))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            ("out_dir", self.out_dir.display().to_string()),
        ];
        for (k, v) in pairs {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
