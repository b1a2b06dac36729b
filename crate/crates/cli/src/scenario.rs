//! Flat `section.key = value` scenario files.
//!
//! Units are fixed per key (see [`KEYS`]). `#` starts a comment. Unknown
//! or repeated keys are errors, reported with their line number.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fwm_core::dispersion::FrequencyWindow;
use fwm_core::units::{
    AngularFrequency, MEGAHERTZ, NANOMETER, PICOSECOND, PS2_PER_M, PS3_PER_M, PS4_PER_M,
};
use fwm_core::{
    BirefringentDispersion, Dispersion, EvenTaylorDispersion, FiberSpec, FullTaylorDispersion,
    FwmError, GridOptions, MaterialNonlinearity, PumpConfig, PumpingRegime, Result,
    TabulatedDispersion,
};

/// Every accepted key with its unit.
pub const KEYS: &[(&str, &str)] = &[
    ("label", "text"),
    ("fiber.gamma", "1/(W m)"),
    ("fiber.length", "m"),
    ("fiber.alpha", "1/m"),
    ("fiber.delta_n", "dimensionless"),
    ("fiber.chi3", "m^2/V^2"),
    ("fiber.n_ref", "dimensionless"),
    ("fiber.a_eff", "m^2"),
    ("dispersion.model", "even_taylor | full_taylor | tabulated"),
    ("dispersion.center", "nm (default: pump midpoint)"),
    ("dispersion.beta0", "1/m"),
    ("dispersion.beta1", "ps/m"),
    ("dispersion.beta2", "ps^2/m"),
    ("dispersion.beta3", "ps^3/m"),
    ("dispersion.beta4", "ps^4/m"),
    ("dispersion.window", "nm,nm"),
    ("dispersion.table", "path to CSV omega_rad_per_s,beta_per_m"),
    ("dispersion.zdw_bracket", "nm,nm"),
    ("pump.lambda_p1", "nm (strong pump)"),
    ("pump.lambda_p2", "nm (single-photon pump)"),
    (
        "pump.regime",
        "pulsed_pulsed | pulsed_cw | equivalent_single_photon | cw_cw",
    ),
    ("pump.scheme", "external"),
    ("pump.p1_avg", "W"),
    ("pump.pulse_duration", "ps"),
    ("pump.f_rep", "MHz"),
    ("pump.photons_per_pulse_p2", "count"),
    ("pump.p2_avg", "W (cw_cw only)"),
    ("grid.bin_width", "rad/s"),
    ("grid.half_span", "rad/s"),
    ("grid.filter", "nm,nm"),
];

pub fn unit_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, u)| *u)
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    /// 0 for values set programmatically.
    line: usize,
}

/// Parsed but unresolved key/value pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioFile {
    entries: Vec<Entry>,
    base_dir: Option<PathBuf>,
}

fn at(line: usize, msg: impl std::fmt::Display) -> FwmError {
    if line == 0 {
        FwmError::Config(msg.to_string())
    } else {
        FwmError::Config(format!("line {line}: {msg}"))
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file = ScenarioFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| at(line, format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if unit_of(key).is_none() {
                return Err(at(line, format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(at(line, format!("`{key}` has no value")));
            }
            if let Some(prev) = file.entries.iter().find(|e| e.key == key) {
                return Err(at(
                    line,
                    format!("`{key}` already set on line {}", prev.line),
                ));
            }
            file.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(file)
    }

    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = Some(dir.into());
        self
    }

    /// Replaces or adds a value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if unit_of(key).is_none() {
            return Err(FwmError::Config(format!("unknown key `{key}`")));
        }
        let value = value.into();
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.value = value;
                e.line = 0;
            }
            None => self.entries.push(Entry {
                key: key.to_string(),
                value,
                line: 0,
            }),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        let v: f64 = e.value.parse().map_err(|_| {
            at(
                e.line,
                format!("`{key}` must be a number, got `{}`", e.value),
            )
        })?;
        if !v.is_finite() {
            return Err(at(e.line, format!("`{key}` must be finite")));
        }
        Ok(Some(v))
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| FwmError::Config(format!("missing required key `{key}`")))
    }

    fn pair(&self, key: &str) -> Result<Option<(f64, f64)>> {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        parse_pair(&e.value)
            .map(Some)
            .map_err(|m| at(e.line, format!("`{key}`: {m}")))
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.get(key)
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let lambda_p1 = self.required("pump.lambda_p1")? * NANOMETER;
        let lambda_p2 = self.required("pump.lambda_p2")? * NANOMETER;

        if let Some(e) = self.entry("pump.scheme") {
            if e.value != "external" {
                return Err(at(
                    e.line,
                    format!(
                        "pump scheme `{}` not supported: only external pumping (pair frequencies between the pumps) is modeled",
                        e.value
                    ),
                ));
            }
        }
        let regime = match self.entry("pump.regime") {
            Some(e) => e
                .value
                .parse::<PumpingRegime>()
                .map_err(|_| {
                    at(
                        e.line,
                        format!(
                            "unknown regime `{}` (expected pulsed_pulsed, pulsed_cw, equivalent_single_photon or cw_cw)",
                            e.value
                        ),
                    )
                })?,
            None => PumpingRegime::PulsedPulsed,
        };
        let pump = PumpConfig {
            lambda_p1,
            lambda_p2,
            regime,
            p1_avg: self.required("pump.p1_avg")?,
            pulse_duration: self.required("pump.pulse_duration")? * PICOSECOND,
            f_rep: self.number("pump.f_rep")?.map(|f| f * MEGAHERTZ),
            photons_per_pulse_p2: self.number("pump.photons_per_pulse_p2")?.unwrap_or(1.0),
            p2_avg: self.number("pump.p2_avg")?,
        };
        pump.validate()?;

        let w1 = pump.omega_p1()?;
        let w2 = pump.omega_p2()?;
        let midpoint = AngularFrequency::new(0.5 * (w1.value() + w2.value()))?;
        let dispersion = self.dispersion(midpoint)?;
        let fiber = self.fiber(dispersion, midpoint)?;

        let grid = GridOptions {
            bin_width: self.number("grid.bin_width")?,
            half_span: self.number("grid.half_span")?,
            filter_band: self
                .pair("grid.filter")?
                .map(nm_band_to_omega)
                .transpose()?,
        };
        if let Some(bw) = grid.bin_width {
            if bw <= 0.0 {
                return Err(FwmError::Config("grid.bin_width must be positive".into()));
            }
        }
        if let Some(s) = grid.half_span {
            if s <= 0.0 {
                return Err(FwmError::Config("grid.half_span must be positive".into()));
            }
        }
        let zdw_bracket = self
            .pair("dispersion.zdw_bracket")?
            .map(nm_band_to_omega)
            .transpose()?;

        Ok(Scenario {
            label: self.text("label").unwrap_or("scenario").to_string(),
            fiber,
            pump,
            grid,
            zdw_bracket,
            file: self.clone(),
        })
    }

    fn dispersion(&self, midpoint: AngularFrequency) -> Result<Dispersion> {
        let model = self.text("dispersion.model").unwrap_or("even_taylor");
        let center = match self.number("dispersion.center")? {
            Some(nm) => AngularFrequency::from_wavelength_nm(nm)?,
            None => midpoint,
        };
        let window = self
            .pair("dispersion.window")?
            .map(nm_band_to_omega)
            .transpose()?
            .map(|(lo, hi)| FrequencyWindow::new(lo, hi))
            .transpose()?;
        let coeff = |k: usize, scale: f64| -> Result<f64> {
            Ok(self.number(&format!("dispersion.beta{k}"))?.unwrap_or(0.0) * scale)
        };
        let scales = [1.0, PICOSECOND, PS2_PER_M, PS3_PER_M, PS4_PER_M];

        let base: Dispersion = match model {
            "even_taylor" => {
                for k in [0, 1, 3] {
                    if let Some(e) = self.entry(&format!("dispersion.beta{k}")) {
                        return Err(at(
                            e.line,
                            "even_taylor takes only beta2 and beta4; use full_taylor for odd orders",
                        ));
                    }
                }
                let m =
                    EvenTaylorDispersion::new(center, coeff(2, scales[2])?, coeff(4, scales[4])?)?;
                match window {
                    Some(w) => m.with_window(w)?.into(),
                    None => m.into(),
                }
            }
            "full_taylor" => {
                let mut c = [0.0; 5];
                for (k, slot) in c.iter_mut().enumerate() {
                    *slot = coeff(k, scales[k])?;
                }
                let m = FullTaylorDispersion::new(center, c)?;
                match window {
                    Some(w) => m.with_window(w)?.into(),
                    None => m.into(),
                }
            }
            "tabulated" => {
                let e = self.entry("dispersion.table").ok_or_else(|| {
                    FwmError::Config("tabulated model needs dispersion.table".into())
                })?;
                let mut path = PathBuf::from(&e.value);
                if path.is_relative() {
                    if let Some(dir) = &self.base_dir {
                        path = dir.join(path);
                    }
                }
                TabulatedDispersion::from_csv_path(&path)?.into()
            }
            other => {
                let line = self.entry("dispersion.model").map_or(0, |e| e.line);
                return Err(at(
                    line,
                    format!("unknown dispersion model `{other}` (expected even_taylor, full_taylor or tabulated)"),
                ));
            }
        };
        match self.number("fiber.delta_n")? {
            Some(dn) => Ok(BirefringentDispersion::new(base, dn)?.into()),
            None => Ok(base),
        }
    }

    fn fiber(&self, dispersion: Dispersion, midpoint: AngularFrequency) -> Result<FiberSpec> {
        let length = self.required("fiber.length")?;
        let material = match (
            self.number("fiber.chi3")?,
            self.number("fiber.n_ref")?,
            self.number("fiber.a_eff")?,
        ) {
            (None, None, None) => None,
            (Some(chi3), Some(n_ref), Some(a_eff)) => Some(MaterialNonlinearity {
                chi3,
                n_ref,
                a_eff,
                omega_ref: midpoint,
            }),
            _ => {
                return Err(FwmError::Config(
                    "fiber.chi3, fiber.n_ref and fiber.a_eff must be given together".into(),
                ))
            }
        };
        let dispersion = Arc::new(dispersion);
        let mut fiber = match (self.number("fiber.gamma")?, material) {
            (Some(g), None) => FiberSpec::new(g, length, dispersion)?,
            (Some(g), Some(m)) => FiberSpec::new(g, length, dispersion)?.with_material(m)?,
            (None, Some(m)) => FiberSpec::from_material(m, length, dispersion)?,
            (None, None) => {
                return Err(FwmError::Config(
                    "give fiber.gamma or fiber.chi3/n_ref/a_eff".into(),
                ))
            }
        };
        if let Some(alpha) = self.number("fiber.alpha")? {
            fiber = fiber.with_loss(alpha)?;
        }
        fiber.validate()?;
        Ok(fiber)
    }
}

/// `a,b` as two distinct positive numbers, in the order written.
pub fn parse_pair(text: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `lo,hi`, got `{text}`"))?;
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad number `{}`", a.trim()))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad number `{}`", b.trim()))?;
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 && a != b) {
        return Err(format!("need two distinct positive values, got `{text}`"));
    }
    Ok((a, b))
}

/// Wavelength band in nm to an ascending angular-frequency band.
fn nm_band_to_omega((a, b): (f64, f64)) -> Result<(f64, f64)> {
    let wa = AngularFrequency::from_wavelength_nm(a)?.value();
    let wb = AngularFrequency::from_wavelength_nm(b)?.value();
    Ok((wa.min(wb), wa.max(wb)))
}

/// A fully validated fiber + pump + grid bundle.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub fiber: FiberSpec,
    pub pump: PumpConfig,
    pub grid: GridOptions,
    /// Search interval for the zero-dispersion frequency, rad/s.
    pub zdw_bracket: Option<(f64, f64)>,
    file: ScenarioFile,
}

impl Scenario {
    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    /// Re-resolves with one key replaced.
    pub fn with_value(&self, key: &str, value: impl Into<String>) -> Result<Scenario> {
        let mut f = self.file.clone();
        f.set(key, value)?;
        f.resolve()
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    ScenarioFile::parse(text)?.resolve()
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| FwmError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut file = ScenarioFile::parse(&text)?;
    if let Some(dir) = path.parent() {
        file = file.with_base_dir(dir);
    }
    file.resolve()
}
