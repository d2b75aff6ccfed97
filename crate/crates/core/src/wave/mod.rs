//! Westervelt solver on structured grids.

pub mod excitation;
pub mod grid;
pub mod norms;
pub mod run;
pub mod solve;
pub mod stepper;

pub use excitation::Excitation;
pub use grid::{build_grid, Grid, NodeTag};
pub use run::{k_field, run_problem, run_wave, ProbeTrace, RunControl, Snapshot, WaveOutput};
pub use stepper::{nondegeneracy_min, Damping, Monitors, WaveField, WaveProblem, WaveStepper};
