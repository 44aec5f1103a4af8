//! Scenario runner for the breakclause pricing library: TOML configs in,
//! deterministic CSV tables and figure data out.

pub mod config;
pub mod presets;
pub mod runner;

pub use config::{ConfigError, ScenarioConfig};
pub use presets::Preset;
pub use runner::{CliError, RunContext};
