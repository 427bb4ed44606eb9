//! Experiment runner: configuration, Monte-Carlo sweeps, beampatterns and
//! result files.

pub mod config;
pub mod emit;
pub mod sweep;

pub use config::{Axis, BeampatternSpec, Method, RawConfig, SweepSpec};
pub use emit::{emit_beampattern, emit_sweep, Format};
pub use sweep::{run_beampattern, run_beampattern_spec, run_sweep, SweepResult, SweepRow};
