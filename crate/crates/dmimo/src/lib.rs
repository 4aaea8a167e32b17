//! Sweep harness for the `dmimo-core` capacity model: key-value configuration,
//! named presets, a parallel deterministic sweep runner and CSV/JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod sweep;

pub use config::SweepConfig;
pub use error::CliError;
pub use output::RunManifest;
pub use sweep::{run_sweep, PointResult, SweepResult};
