//! Bubble dynamics, fractional calculus and a nonlinear wave solver for
//! ultrasound contrast agent simulations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod bubble;
pub mod config;
pub mod coupling;
pub mod error;
pub mod fractional;
pub mod io;
pub mod ode;
pub mod units;
pub mod wave;

pub use analysis::{fft_spectrum, harmonic_metrics, waveform_skewness, HarmonicMetrics, Spectrum, Window};
pub use bubble::{BubbleModel, BubbleState, ModelKind};
pub use config::{
    load_config, Attenuation, DerivedParams, NewmarkSpec, NonlinearityCoefficient, PhysicalParams, SideCondition,
    SimulationConfig, WaveSpec,
};
pub use coupling::{bubble_source, run_coupled, run_one_way, CoupledOutput, OneWayOutput};
pub use error::{Error, Result};
pub use fractional::{l1_weights, FractionalHistory};
pub use ode::{simulate_bubble, BubbleTrajectory, OdeSettings, PressureDrive, Termination, UniformSeries};
pub use wave::{run_wave, ProbeTrace, WaveOutput};
