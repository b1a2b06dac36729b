//! Single-photon four-wave mixing in optical fibers: dispersion models,
//! phase matching, pair-generation rates and an exact small-system oracle.

pub mod dispersion;
pub mod error;
pub mod fiber;
pub mod oracle;
pub mod pairgen;
pub mod phasematch;
pub mod roots;
pub mod spline;
pub mod units;

pub use dispersion::{
    find_zdw, BirefringentDispersion, Dispersion, DispersionModel, EvenTaylorDispersion,
    FrequencyWindow, FullTaylorDispersion, TabulatedDispersion,
};
pub use error::{FwmError, Result};
pub use fiber::{
    effective_length, gamma_from_chi3, walkoff_length, FiberSpec, MaterialNonlinearity,
};
pub use oracle::{
    compare_first_order, correction_curve, coupling_from_powers, evolve, pair_probability_spectrum,
    CorrectionPoint, FirstOrderComparison, OracleConfig, OracleState,
};
pub use pairgen::{
    bandwidth_integral, conversion_efficiency, low_gain_correction, pair_rate, spectral_density,
    EfficiencyReport, GridOptions, LowGainCorrection, PairGenerator, PumpConfig, PumpingRegime,
    RateTerms, SpectralGrid, Spectrum, Warning,
};
pub use phasematch::{
    birefringent_roots, default_bracket, numeric_root, required_pump_power, roots_in,
    total_mismatch, MismatchContext,
};
pub use units::{
    omega_to_wavelength, pump_midpoint_and_offset, wavelength_to_omega, AngularFrequency,
    PhysicalConstants,
};
