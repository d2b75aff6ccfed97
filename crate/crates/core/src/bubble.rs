//! Rayleigh–Plesset type bubble models.
//!
//! Every radius model is written as
//!
//! ```text
//! ρ (R R_tt + 3/2 R_t²) = h0(R, R_t) − p
//! ```
//!
//! where `p` is the external acoustic pressure and `h0` collects the internal
//! pressure contributions of the chosen variant. The linearized volume
//! oscillator has no such form and is evaluated by [`linear_volume_rhs`].

use std::fmt;
use std::str::FromStr;

use crate::config::{DerivedParams, PhysicalParams};
use crate::error::{Error, Result};

/// Closed set of bubble models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// p_b − 4μ R_t/R
    RpSimple,
    /// adds constant surface tension −2σ/R
    RpSurface,
    /// adds polytropic gas pressure p_pgn (R0/R)^{3κ} (RPNNP)
    Rpnnp,
    /// gas term multiplied by the radiation factor (1 − 3κ R_t/c)
    RpRadiation,
    /// thin elastic shell: σ(R) = χ(R²/R0² − 1) and shell viscosity κ_s
    RpCoated,
    /// linearized oscillator for the volume perturbation
    LinearVolume,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        Self::RpSimple,
        Self::RpSurface,
        Self::Rpnnp,
        Self::RpRadiation,
        Self::RpCoated,
        Self::LinearVolume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RpSimple => "rp_simple",
            Self::RpSurface => "rp_surface",
            Self::Rpnnp => "rpnnp",
            Self::RpRadiation => "rp_radiation",
            Self::RpCoated => "rp_coated",
            Self::LinearVolume => "linear_volume",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!("unknown model `{s}` (expected rp_simple, rp_surface, rpnnp, rp_radiation, rp_coated or linear_volume)")
            })
    }
}

/// Radius and wall velocity of one bubble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleState {
    /// Radius (m), always positive.
    pub radius: f64,
    /// Wall velocity (m/s).
    pub velocity: f64,
}

impl BubbleState {
    pub fn new(radius: f64, velocity: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(Self { radius, velocity })
    }

    /// The rest state (R0, 0).
    pub fn at_rest(params: &PhysicalParams) -> Self {
        Self {
            radius: params.r0,
            velocity: 0.0,
        }
    }
}

/// Coefficients of one bubble model, precomputed from the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleModel {
    pub kind: ModelKind,
    rho: f64,
    mu: f64,
    sigma: f64,
    chi: f64,
    kappa: f64,
    kappa_s: f64,
    c: f64,
    r0: f64,
    p_b: f64,
    p_pgn: f64,
    radiation: bool,
}

impl BubbleModel {
    pub fn new(kind: ModelKind, params: &PhysicalParams) -> Self {
        let d = params.derive();
        let p_pgn = match kind {
            ModelKind::RpCoated => d.p_pgn_coated,
            _ => d.p_pgn_uncoated,
        };
        Self {
            kind,
            rho: params.rho,
            mu: params.mu,
            sigma: params.sigma,
            chi: params.chi,
            kappa: params.kappa,
            kappa_s: params.kappa_s,
            c: params.c,
            r0: params.r0,
            p_b: d.p_b,
            p_pgn,
            radiation: matches!(kind, ModelKind::RpRadiation | ModelKind::RpCoated),
        }
    }

    /// Drops the radiation factor, i.e. the c → ∞ limit.
    pub fn without_radiation(mut self) -> Self {
        self.radiation = false;
        self
    }

    pub fn density(&self) -> f64 {
        self.rho
    }

    pub fn equilibrium_radius(&self) -> f64 {
        self.r0
    }

    /// Effective surface tension: χ(R²/R0² − 1) for the coated model, the
    /// constant σ otherwise.
    pub fn surface_tension(&self, radius: f64) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(self.tension_unchecked(radius))
    }

    #[inline]
    fn tension_unchecked(&self, radius: f64) -> f64 {
        match self.kind {
            ModelKind::RpCoated => {
                let x = radius / self.r0;
                self.chi * (x * x - 1.0)
            }
            _ => self.sigma,
        }
    }

    /// Internal pressure terms of the model, excluding the external pressure.
    pub fn h0(&self, state: &BubbleState) -> Result<f64> {
        if !(state.radius > 0.0) {
            return Err(Error::NonPositiveRadius(state.radius));
        }
        if self.kind == ModelKind::LinearVolume {
            return Err(Error::NoPressureForm(self.kind.name()));
        }
        Ok(self.h0_unchecked(state.radius, state.velocity))
    }

    #[inline]
    fn h0_unchecked(&self, r: f64, v: f64) -> f64 {
        let viscous = 4.0 * self.mu * v / r;
        match self.kind {
            ModelKind::RpSimple => self.p_b - viscous,
            ModelKind::RpSurface => self.p_b - viscous - 2.0 * self.sigma / r,
            ModelKind::Rpnnp | ModelKind::RpRadiation | ModelKind::RpCoated => {
                let mut gas = self.p_pgn * (self.r0 / r).powf(3.0 * self.kappa);
                if self.radiation {
                    gas *= 1.0 - 3.0 * self.kappa * v / self.c;
                }
                let mut h = self.p_b - viscous - 2.0 * self.tension_unchecked(r) / r + gas;
                if self.kind == ModelKind::RpCoated {
                    h -= 4.0 * self.kappa_s * v / (r * r);
                }
                h
            }
            ModelKind::LinearVolume => f64::NAN,
        }
    }

    /// Wall acceleration R_tt = (−3/2 R_t² + (h0 − p)/ρ) / R.
    pub fn acceleration(&self, state: &BubbleState, pressure: f64) -> Result<f64> {
        let h = self.h0(state)?;
        Ok(self.accel_from_h0(state.radius, state.velocity, h, pressure))
    }

    #[inline]
    fn accel_from_h0(&self, r: f64, v: f64, h: f64, pressure: f64) -> f64 {
        (-1.5 * v * v + (h - pressure) / self.rho) / r
    }

    /// Acceleration without the positivity guard; returns NaN for R ≤ 0 so
    /// integrators can flag the step as non-finite.
    #[inline]
    pub fn acceleration_raw(&self, radius: f64, velocity: f64, pressure: f64) -> f64 {
        if !(radius > 0.0) {
            return f64::NAN;
        }
        let h = self.h0_unchecked(radius, velocity);
        self.accel_from_h0(radius, velocity, h, pressure)
    }
}

/// Free-function form of [`BubbleModel::surface_tension`].
pub fn effective_surface_tension(kind: ModelKind, radius: f64, params: &PhysicalParams) -> Result<f64> {
    BubbleModel::new(kind, params).surface_tension(radius)
}

/// Free-function form of [`BubbleModel::h0`].
pub fn h0(kind: ModelKind, state: &BubbleState, params: &PhysicalParams) -> Result<f64> {
    BubbleModel::new(kind, params).h0(state)
}

/// Free-function form of [`BubbleModel::acceleration`].
pub fn acceleration(kind: ModelKind, state: &BubbleState, pressure: f64, params: &PhysicalParams) -> Result<f64> {
    BubbleModel::new(kind, params).acceleration(state, pressure)
}

/// Right-hand side of the volume oscillator for the perturbation `v = V − v0`:
///
/// ```text
/// v_tt = −δ 4μ/(ρ0 R0²) v_t − ω0² v − 4π R0/ρ0 p
///        [ + (κ+1) ω0² v² / (2 v0) + (2 v v_tt_prev + v_t²) / (6 v0) ]
/// ```
///
/// The bracketed terms are included when `nonlinear` is set; the `v_tt` they
/// contain is lagged (`v_tt_prev`, the previous accepted value).
pub fn linear_volume_rhs(
    v: f64,
    v_t: f64,
    pressure: f64,
    params: &PhysicalParams,
    derived: &DerivedParams,
    nonlinear: Option<f64>,
) -> f64 {
    let w2 = derived.omega0 * derived.omega0;
    let damping = params.delta * 4.0 * params.mu / (params.rho0 * params.r0 * params.r0);
    let mut acc = -damping * v_t - w2 * v - 4.0 * std::f64::consts::PI * params.r0 / params.rho0 * pressure;
    if let Some(v_tt_prev) = nonlinear {
        let v0 = derived.v0;
        acc += (params.kappa + 1.0) * w2 * v * v / (2.0 * v0) + (2.0 * v * v_tt_prev + v_t * v_t) / (6.0 * v0);
    }
    acc
}

/// Velocity/radius band used when sampling Lipschitz ratios of h0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateBand {
    pub r_low: f64,
    pub r_high: f64,
    pub v_max: f64,
}

/// One sampled difference quotient of h0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LipschitzSample {
    Ratio(f64),
    /// Coincident states: the quotient is undefined.
    Skip,
}

/// |h0(s1) − h0(s2)| / (|R1 − R2| + |R1_t − R2_t|) for two states inside the
/// band.
pub fn lipschitz_sample(
    kind: ModelKind,
    s1: &BubbleState,
    s2: &BubbleState,
    params: &PhysicalParams,
    band: &StateBand,
) -> Result<LipschitzSample> {
    if !(band.r_low > 0.0) {
        return Err(Error::OutOfBand(format!("r_low must be positive, got {}", band.r_low)));
    }
    for s in [s1, s2] {
        if s.radius < band.r_low || s.radius > band.r_high || s.velocity.abs() > band.v_max {
            return Err(Error::OutOfBand(format!(
                "(R, R_t) = ({:e}, {:e}) not in [{:e}, {:e}] × [−{:e}, {:e}]",
                s.radius, s.velocity, band.r_low, band.r_high, band.v_max, band.v_max
            )));
        }
    }
    let dist = (s1.radius - s2.radius).abs() + (s1.velocity - s2.velocity).abs();
    if dist == 0.0 {
        return Ok(LipschitzSample::Skip);
    }
    let model = BubbleModel::new(kind, params);
    let diff = (model.h0(s1)? - model.h0(s2)?).abs();
    Ok(LipschitzSample::Ratio(diff / dist))
}
