//! Built-in scenarios for the three reference fibers.

use fwm_core::{FwmError, Result};

use crate::scenario::{Scenario, ScenarioFile};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "pm-silica",
        summary: "birefringent silica fiber, 10 cm, pumps 890/660 nm",
        text: PM_SILICA,
    },
    Preset {
        name: "microstructured-silica",
        summary: "microstructured silica fiber at the 716 nm ZDW, 2 m, filtered 686-750 nm",
        text: MICROSTRUCTURED_SILICA,
    },
    Preset {
        name: "chalc-microwire",
        summary: "As2Se3 chalcogenide microwire, 10 cm, pumps 1620/1480 nm",
        text: CHALC_MICROWIRE,
    },
];

const PM_SILICA: &str = "\
label = pm-silica
fiber.gamma = 4.6e-3
fiber.length = 0.10
fiber.delta_n = 3e-4
dispersion.model = even_taylor
dispersion.beta2 = 0.040            # derived by inversion, not a published value
pump.lambda_p1 = 890
pump.lambda_p2 = 660
pump.regime = pulsed_pulsed
pump.scheme = external
pump.p1_avg = 5.0
pump.pulse_duration = 5
pump.f_rep = 80
pump.photons_per_pulse_p2 = 1
";

const MICROSTRUCTURED_SILICA: &str = "\
label = microstructured-silica
fiber.gamma = 2.7e-2
fiber.length = 2.0
dispersion.model = full_taylor
dispersion.beta2 = 0
dispersion.beta3 = 1e-4             # illustrative; cancels in the mismatch
dispersion.beta4 = 3.749498e-6      # derived by inversion, not a published value
dispersion.zdw_bracket = 705.74,726.49
pump.lambda_p1 = 760
pump.lambda_p2 = 676.75
pump.regime = pulsed_pulsed
pump.scheme = external
pump.p1_avg = 1.0
pump.pulse_duration = 2
pump.f_rep = 80
pump.photons_per_pulse_p2 = 1
grid.filter = 686,750
";

const CHALC_MICROWIRE: &str = "\
label = chalc-microwire
fiber.gamma = 180
fiber.length = 0.10
dispersion.model = even_taylor
dispersion.beta2 = 0.05
pump.lambda_p1 = 1620
pump.lambda_p2 = 1480
pump.regime = pulsed_pulsed
pump.scheme = external
pump.p1_avg = 1.3e-4
pump.pulse_duration = 2
pump.f_rep = 80
pump.photons_per_pulse_p2 = 1
";

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        FwmError::Config(format!(
            "unknown preset `{name}` (available: {})",
            names.join(", ")
        ))
    })
}

pub fn load(name: &str) -> Result<Scenario> {
    ScenarioFile::parse(find(name)?.text)?.resolve()
}
