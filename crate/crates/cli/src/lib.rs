//! Scenario files, built-in presets and the `fwm` command-line front end.

pub mod app;
pub mod commands;
pub mod presets;
pub mod scenario;

pub use app::{run, Cli};
pub use scenario::{load_scenario, parse_scenario, Scenario, ScenarioFile};
