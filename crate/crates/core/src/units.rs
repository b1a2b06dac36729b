//! Physical constants and unit conversions.
//!
//! Everything inside the crate is SI with angular frequencies in rad/s.
//! Wavelengths are vacuum wavelengths.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{FwmError, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

pub const NANOMETER: f64 = 1e-9;
pub const PICOSECOND: f64 = 1e-12;
pub const MEGAHERTZ: f64 = 1e6;
/// ps²/m in s²/m.
pub const PS2_PER_M: f64 = 1e-24;
/// ps³/m in s³/m.
pub const PS3_PER_M: f64 = 1e-36;
/// ps⁴/m in s⁴/m.
pub const PS4_PER_M: f64 = 1e-48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT,
        hbar: HBAR,
    };
}

/// Angular frequency in rad/s, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngularFrequency(f64);

impl AngularFrequency {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(FwmError::Domain(format!(
                "angular frequency must be positive and finite, got {value}"
            )))
        }
    }

    pub fn from_wavelength(lambda: f64) -> Result<Self> {
        wavelength_to_omega(lambda)
    }

    pub fn from_wavelength_nm(lambda_nm: f64) -> Result<Self> {
        wavelength_to_omega(lambda_nm * NANOMETER)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Vacuum wavelength in m.
    pub fn wavelength(self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.0
    }

    pub fn wavelength_nm(self) -> f64 {
        self.wavelength() / NANOMETER
    }

    /// Photon energy ħω in J.
    pub fn photon_energy(self) -> f64 {
        HBAR * self.0
    }
}

impl fmt::Display for AngularFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6e} rad/s", self.0)
    }
}

/// ω = 2πc/λ for a vacuum wavelength in metres.
pub fn wavelength_to_omega(lambda: f64) -> Result<AngularFrequency> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(FwmError::Domain(format!(
            "wavelength must be positive, got {lambda} m"
        )));
    }
    AngularFrequency::new(2.0 * PI * SPEED_OF_LIGHT / lambda)
}

/// λ = 2πc/ω, metres.
pub fn omega_to_wavelength(omega: f64) -> Result<f64> {
    Ok(AngularFrequency::new(omega)?.wavelength())
}

/// Centre frequency ω₀ = (ω_p1+ω_p2)/2 and pump offset Δω = |ω_p2−ω_p1|/2.
pub fn pump_midpoint_and_offset(
    omega_p1: AngularFrequency,
    omega_p2: AngularFrequency,
) -> (AngularFrequency, f64) {
    let (a, b) = (omega_p1.value(), omega_p2.value());
    (AngularFrequency(0.5 * (a + b)), 0.5 * (b - a).abs())
}
