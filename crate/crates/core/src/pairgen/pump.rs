use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{FwmError, Result};
use crate::units::{AngularFrequency, HBAR};

/// Which of the two pumps are pulsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PumpingRegime {
    /// Both pumps pulsed and overlapping.
    PulsedPulsed,
    /// Weak (single-photon) pump pulsed, strong pump CW.
    PulsedCw,
    /// Strong pump pulsed, weak pump CW at one photon per strong pulse on average.
    EquivalentSinglePhoton,
    /// Both pumps CW.
    CwCw,
}

impl PumpingRegime {
    pub const ALL: [PumpingRegime; 4] = [
        PumpingRegime::PulsedPulsed,
        PumpingRegime::PulsedCw,
        PumpingRegime::EquivalentSinglePhoton,
        PumpingRegime::CwCw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PumpingRegime::PulsedPulsed => "pulsed_pulsed",
            PumpingRegime::PulsedCw => "pulsed_cw",
            PumpingRegime::EquivalentSinglePhoton => "equivalent_single_photon",
            PumpingRegime::CwCw => "cw_cw",
        }
    }

    pub fn strong_pump_pulsed(self) -> bool {
        matches!(
            self,
            PumpingRegime::PulsedPulsed | PumpingRegime::EquivalentSinglePhoton
        )
    }

    pub fn weak_pump_pulsed(self) -> bool {
        matches!(self, PumpingRegime::PulsedPulsed | PumpingRegime::PulsedCw)
    }

    pub fn needs_repetition_rate(self) -> bool {
        self != PumpingRegime::CwCw
    }
}

impl fmt::Display for PumpingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PumpingRegime {
    type Err = FwmError;

    fn from_str(s: &str) -> Result<Self> {
        PumpingRegime::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                FwmError::Config(format!(
                    "unknown regime `{s}` (expected pulsed_pulsed, pulsed_cw, equivalent_single_photon or cw_cw)"
                ))
            })
    }
}

/// Pump wavelengths, powers and timing.
///
/// Pump 1 is the strong classical pump and must sit at the longer
/// wavelength; pump 2 carries the single photon.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpConfig {
    /// m
    pub lambda_p1: f64,
    /// m
    pub lambda_p2: f64,
    pub regime: PumpingRegime,
    /// Strong-pump average power, W.
    pub p1_avg: f64,
    /// Pulse duration T, s. Also the characteristic time for CW pumping.
    pub pulse_duration: f64,
    /// Repetition rate, 1/s.
    pub f_rep: Option<f64>,
    pub photons_per_pulse_p2: f64,
    /// Weak-pump average power for CW/CW, W. Defaults to one photon per T.
    pub p2_avg: Option<f64>,
}

impl PumpConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_p1", self.lambda_p1), ("lambda_p2", self.lambda_p2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FwmError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.lambda_p1 <= self.lambda_p2 {
            return Err(FwmError::Config(format!(
                "strong pump must be at the longer wavelength: lambda_p1 = {:.3} nm <= lambda_p2 = {:.3} nm",
                self.lambda_p1 * 1e9,
                self.lambda_p2 * 1e9
            )));
        }
        if !(self.pulse_duration.is_finite() && self.pulse_duration > 0.0) {
            return Err(FwmError::Config("pulse duration must be positive".into()));
        }
        if !(self.p1_avg.is_finite() && self.p1_avg >= 0.0) {
            return Err(FwmError::Config("p1_avg must be >= 0".into()));
        }
        if !(self.photons_per_pulse_p2.is_finite() && self.photons_per_pulse_p2 > 0.0) {
            return Err(FwmError::Config("photons_per_pulse_p2 must be > 0".into()));
        }
        if let Some(p2) = self.p2_avg {
            if !(p2.is_finite() && p2 >= 0.0) {
                return Err(FwmError::Config("p2_avg must be >= 0".into()));
            }
        }
        if self.regime.needs_repetition_rate() {
            let f = self.f_rep.ok_or_else(|| {
                FwmError::Config(format!("regime {} needs a repetition rate", self.regime))
            })?;
            if !(f.is_finite() && f > 0.0) {
                return Err(FwmError::Config("f_rep must be positive".into()));
            }
            if self.pulse_duration * f >= 1.0 {
                return Err(FwmError::Config(format!(
                    "pulse duration x repetition rate = {} must be < 1",
                    self.pulse_duration * f
                )));
            }
        }
        Ok(())
    }

    pub fn omega_p1(&self) -> Result<AngularFrequency> {
        AngularFrequency::from_wavelength(self.lambda_p1)
    }

    pub fn omega_p2(&self) -> Result<AngularFrequency> {
        AngularFrequency::from_wavelength(self.lambda_p2)
    }

    /// Characteristic time T.
    pub fn characteristic_time(&self) -> f64 {
        self.pulse_duration
    }

    /// Frequency-bin width δω_p = 2π/T.
    pub fn pump_linewidth(&self) -> f64 {
        2.0 * PI / self.pulse_duration
    }

    fn f_rep_or_err(&self) -> Result<f64> {
        self.f_rep.ok_or_else(|| {
            FwmError::Config(format!("regime {} needs a repetition rate", self.regime))
        })
    }

    /// Strong-pump power seen by the mixing process: peak power
    /// P₁avg/(f_rep·T) when pulsed, the average power when CW.
    pub fn p1_peak(&self) -> Result<f64> {
        if self.regime.strong_pump_pulsed() {
            Ok(self.p1_avg / (self.f_rep_or_err()? * self.pulse_duration))
        } else {
            Ok(self.p1_avg)
        }
    }

    /// Weak-pump power: nħω_p2/T, or the configured CW average for CW/CW.
    pub fn p2_power(&self) -> Result<f64> {
        let single =
            self.photons_per_pulse_p2 * HBAR * self.omega_p2()?.value() / self.pulse_duration;
        Ok(match (self.regime, self.p2_avg) {
            (PumpingRegime::CwCw, Some(p)) => p,
            _ => single,
        })
    }

    /// ζ₂ = 2πħω_p2/T².
    pub fn zeta2(&self) -> Result<f64> {
        Ok(2.0 * PI * HBAR * self.omega_p2()?.value() / self.pulse_duration.powi(2))
    }

    /// Weak-pump photons entering the fiber per second.
    pub fn weak_photon_rate(&self) -> Result<f64> {
        if self.regime.weak_pump_pulsed() {
            Ok(self.f_rep_or_err()? * self.photons_per_pulse_p2)
        } else {
            Ok(self.p2_power()? / (HBAR * self.omega_p2()?.value()))
        }
    }
}
