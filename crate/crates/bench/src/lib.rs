//! Fixtures shared by the criterion benches.

use fwm_cli::{presets, Scenario};
use fwm_core::{OracleConfig, PairGenerator};

pub const PRESET_NAMES: [&str; 3] = ["pm-silica", "microstructured-silica", "chalc-microwire"];

pub fn scenario(name: &str) -> Scenario {
    presets::load(name).expect("built-in preset")
}

pub fn generator(s: &Scenario) -> PairGenerator {
    PairGenerator::new(&s.fiber, &s.pump).expect("preset is valid")
}

/// `modes` cell-centered modes across ±4 sinc lobes, total first-order η of 1e-4.
pub fn oracle_config(modes: usize) -> OracleConfig {
    OracleConfig::spanning_lobes(modes, 4.0, 1e-4, 1.0).expect("valid oracle setup")
}
