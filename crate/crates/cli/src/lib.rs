//! Experiment runner: presets, run artifacts (CSV, JSON, SVG), structural
//! verification and parameter sweeps.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use config::{preset_paper, OracleMode, RunConfig};
pub use error::CliError;
pub use run::{execute, run, RunOutput};
pub use sweep::sweep;
pub use verify::verify;
