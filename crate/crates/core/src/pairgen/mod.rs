//! Spontaneous pair generation seeded by a single pump photon.

mod grid;
mod pump;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

pub use grid::{
    auto_half_span, check_coverage, check_resolution, display_grid, main_lobes, quadrature_grid,
    Bin, GridOptions, Lobe, SpectralGrid, COVERAGE_HALF_PERIODS, MIN_BINS_PER_LOBE,
};
pub use pump::{PumpConfig, PumpingRegime};

use crate::error::{FwmError, Result};
use crate::fiber::FiberSpec;
use crate::phasematch::MismatchContext;
use crate::units::omega_to_wavelength;

/// Efficiency above which the first-order result is flagged as unreliable.
pub const PERTURBATIVE_LIMIT: f64 = 0.3;
/// Upper bound on γ√(Tζ₂)√P₁·L for the low-gain expansion.
pub const GAIN_PARAMETER_LIMIT: f64 = 0.1;
/// Filter is reported as clipping when it keeps less than this fraction of Δω_s.
pub const FILTER_KEEP_WARNING: f64 = 0.99;

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// ½ Σ sinc²(K(Ω)·L/2)·Δ over the included bins. No resolution or coverage
/// checks.
pub fn integrate_sinc_squared<F>(grid: &SpectralGrid, length: f64, mut mismatch: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    for bin in grid.bins().filter(Bin::included) {
        let s = sinc(0.5 * mismatch(bin.offset)? * length);
        sum += s * s;
    }
    Ok(0.5 * sum * grid.bin_width)
}

/// γ√(Tζ₂)√P₁·L: must be small for the single-photon perturbative result.
pub fn gain_parameter(fiber: &FiberSpec, pump: &PumpConfig) -> Result<f64> {
    let t = pump.characteristic_time();
    Ok(
        fiber.gamma
            * (t * pump.zeta2()?).sqrt()
            * pump.p1_peak()?.sqrt()
            * fiber.effective_length(),
    )
}

/// Phase-matching and power bookkeeping for one fiber and pump pair.
#[derive(Debug, Clone)]
pub struct PairGenerator {
    pub fiber: FiberSpec,
    pub pump: PumpConfig,
    pub ctx: MismatchContext,
    length: f64,
}

impl PairGenerator {
    pub fn new(fiber: &FiberSpec, pump: &PumpConfig) -> Result<Self> {
        fiber.validate()?;
        pump.validate()?;
        let ctx = MismatchContext::new(fiber, pump.omega_p1()?, pump.omega_p2()?, pump.p1_peak()?)?;
        Ok(PairGenerator {
            fiber: fiber.clone(),
            pump: pump.clone(),
            ctx,
            length: fiber.effective_length(),
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// (T/2π)·4γ²P₁P₂L²: pair density at perfect phase matching.
    pub fn peak_density(&self) -> Result<f64> {
        let t = self.pump.characteristic_time();
        Ok(t / (2.0 * PI)
            * 4.0
            * self.fiber.gamma.powi(2)
            * self.ctx.p1_peak
            * self.pump.p2_power()?
            * self.length.powi(2))
    }

    /// Pairs per unit angular frequency at offset Ω from ω₀.
    pub fn density(&self, offset: f64) -> Result<f64> {
        let s = sinc(0.5 * self.ctx.total_mismatch(offset)? * self.length);
        Ok(self.peak_density()? * s * s)
    }

    pub fn display_grid(&self, opts: &GridOptions) -> Result<SpectralGrid> {
        display_grid(&self.ctx, self.length, self.pump.pump_linewidth(), opts)
    }

    pub fn quadrature_grid(&self, opts: &GridOptions) -> Result<SpectralGrid> {
        quadrature_grid(&self.ctx, self.length, self.pump.pump_linewidth(), opts)
    }

    /// Effective bandwidth Δω_s on a checked grid.
    pub fn bandwidth_on(&self, grid: &SpectralGrid) -> Result<f64> {
        check_coverage(&self.ctx, self.length, grid)?;
        check_resolution(&self.ctx, self.length, grid)?;
        integrate_sinc_squared(grid, self.length, |o| self.ctx.total_mismatch(o))
    }

    pub fn bandwidth(&self, opts: &GridOptions) -> Result<f64> {
        self.bandwidth_on(&self.quadrature_grid(opts)?)
    }

    pub fn rate_terms(&self, bandwidth: f64) -> Result<RateTerms> {
        Ok(RateTerms {
            gamma: self.fiber.gamma,
            length: self.length,
            p1_avg: self.pump.p1_avg,
            p1_peak: self.ctx.p1_peak,
            p2: self.pump.p2_power()?,
            bandwidth,
            f_rep: self.pump.f_rep,
            pump_linewidth: self.pump.pump_linewidth(),
        })
    }

    /// Pairs per pulse when both pumps are pulsed.
    pub fn pairs_per_pulse(&self, bandwidth: f64) -> Result<f64> {
        if self.pump.regime != PumpingRegime::PulsedPulsed {
            return Err(FwmError::Config(format!(
                "pairs per pulse is defined for pulsed_pulsed, not {}",
                self.pump.regime
            )));
        }
        let t = self.rate_terms(bandwidth)?;
        Ok(t.per_bin_window(t.p1_peak))
    }

    pub fn pairs_per_second(&self, bandwidth: f64) -> Result<f64> {
        pair_rate(self.pump.regime, &self.rate_terms(bandwidth)?)
    }

    pub fn spectrum(&self, grid: &SpectralGrid) -> Result<Spectrum> {
        let peak = self.peak_density()?;
        let mut rows = Vec::with_capacity(grid.len());
        for bin in grid.bins() {
            let density = if bin.is_pump {
                0.0
            } else {
                let s = sinc(0.5 * self.ctx.total_mismatch(bin.offset)? * self.length);
                peak * s * s
            };
            rows.push(SpectrumRow {
                offset: bin.offset,
                omega: bin.omega,
                density,
                is_pump: bin.is_pump,
            });
        }
        Ok(Spectrum {
            bin_width: grid.bin_width,
            rows,
        })
    }

    pub fn efficiency(&self, opts: &GridOptions) -> Result<EfficiencyReport> {
        let grid = self.quadrature_grid(opts)?;
        let bandwidth = self.bandwidth_on(&grid)?;
        let pairs_per_second = self.pairs_per_second(bandwidth)?;
        let eta = pairs_per_second / self.pump.weak_photon_rate()?;
        let correction = low_gain_correction(eta)?;
        let pairs_per_pulse = self.pump.f_rep.and_then(|f| match self.pump.regime {
            PumpingRegime::PulsedPulsed => self.pairs_per_pulse(bandwidth).ok(),
            PumpingRegime::CwCw => None,
            _ => Some(pairs_per_second / f),
        });
        let gain = gain_parameter(&self.fiber, &self.pump)?;
        let walkoff_length = self
            .fiber
            .walkoff_length(
                self.pump.pulse_duration,
                self.pump.omega_p1()?,
                self.pump.omega_p2()?,
            )
            .ok();

        let mut warnings = Vec::new();
        if let Some(lwo) = walkoff_length {
            if self.pump.regime == PumpingRegime::PulsedPulsed && self.fiber.length > lwo / 3.0 {
                warnings.push(Warning::WalkOff {
                    walkoff_length: lwo,
                    length: self.fiber.length,
                });
            }
        }
        if gain > GAIN_PARAMETER_LIMIT {
            warnings.push(Warning::GainValidity {
                gain_parameter: gain,
            });
        }
        if correction.advisory {
            warnings.push(Warning::BeyondPerturbative { eta });
        }
        if grid.filter_band.is_some() {
            let open = SpectralGrid {
                filter_band: None,
                ..grid.clone()
            };
            let full = integrate_sinc_squared(&open, self.length, |o| self.ctx.total_mismatch(o))?;
            if full > 0.0 && bandwidth < FILTER_KEEP_WARNING * full {
                warnings.push(Warning::FilterClipping {
                    kept_fraction: bandwidth / full,
                });
            }
        }

        Ok(EfficiencyReport {
            regime: self.pump.regime,
            eta,
            eta_corrected: correction.eta_corrected,
            error_bound: correction.error_bound,
            pairs_per_pulse,
            pairs_per_second,
            bandwidth,
            bin_width: grid.bin_width,
            p1_peak: self.ctx.p1_peak,
            gain_parameter: gain,
            walkoff_length,
            warnings,
        })
    }
}

/// Inputs to the pair-rate formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTerms {
    pub gamma: f64,
    pub length: f64,
    pub p1_avg: f64,
    pub p1_peak: f64,
    /// Weak-pump power, W.
    pub p2: f64,
    /// Δω_s, rad/s.
    pub bandwidth: f64,
    pub f_rep: Option<f64>,
    /// δω_p = 2π/T.
    pub pump_linewidth: f64,
}

impl RateTerms {
    /// 4γ²P₁P₂L²·Δω_s/δω_p
    fn per_bin_window(&self, p1: f64) -> f64 {
        4.0 * self.gamma * self.gamma * p1 * self.p2 * self.length * self.length * self.bandwidth
            / self.pump_linewidth
    }
}

/// Pairs per second for each pumping regime.
pub fn pair_rate(regime: PumpingRegime, t: &RateTerms) -> Result<f64> {
    let f_rep = || {
        t.f_rep
            .ok_or_else(|| FwmError::Config(format!("regime {regime} needs a repetition rate")))
    };
    Ok(match regime {
        PumpingRegime::PulsedPulsed => f_rep()? * t.per_bin_window(t.p1_peak),
        PumpingRegime::PulsedCw => f_rep()? * t.per_bin_window(t.p1_avg),
        PumpingRegime::EquivalentSinglePhoton | PumpingRegime::CwCw => {
            4.0 * t.gamma * t.gamma * t.p1_avg * t.p2 * t.length * t.length * t.bandwidth
                / (2.0 * PI)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowGainCorrection {
    pub eta_corrected: f64,
    pub error_bound: f64,
    /// η is past the point where the series can be trusted.
    pub advisory: bool,
}

/// Next-order correction η − 2η² + η³ with error bound 2η².
pub fn low_gain_correction(eta: f64) -> Result<LowGainCorrection> {
    if !(eta.is_finite() && (0.0..=1.0).contains(&eta)) {
        return Err(FwmError::Domain(format!(
            "efficiency must lie in [0, 1], got {eta}"
        )));
    }
    Ok(LowGainCorrection {
        eta_corrected: eta * (1.0 - eta) * (1.0 - eta),
        error_bound: 2.0 * eta * eta,
        advisory: eta > PERTURBATIVE_LIMIT,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    WalkOff { walkoff_length: f64, length: f64 },
    GainValidity { gain_parameter: f64 },
    BeyondPerturbative { eta: f64 },
    FilterClipping { kept_fraction: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::WalkOff {
                walkoff_length,
                length,
            } => write!(
                f,
                "fiber length {length:.4} m exceeds a third of the pump walk-off length {walkoff_length:.4} m"
            ),
            Warning::GainValidity { gain_parameter } => write!(
                f,
                "gain parameter {gain_parameter:.3e} exceeds {GAIN_PARAMETER_LIMIT}; first-order result not valid"
            ),
            Warning::BeyondPerturbative { eta } => write!(
                f,
                "efficiency {eta:.3e} is above {PERTURBATIVE_LIMIT}; low-gain correction is only indicative"
            ),
            Warning::FilterClipping { kept_fraction } => write!(
                f,
                "filter keeps {:.1}% of the generated bandwidth",
                100.0 * kept_fraction
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub regime: PumpingRegime,
    pub eta: f64,
    pub eta_corrected: f64,
    pub error_bound: f64,
    pub pairs_per_pulse: Option<f64>,
    pub pairs_per_second: f64,
    /// Δω_s, rad/s.
    pub bandwidth: f64,
    pub bin_width: f64,
    pub p1_peak: f64,
    pub gain_parameter: f64,
    pub walkoff_length: Option<f64>,
    pub warnings: Vec<Warning>,
}

pub fn spectral_density(fiber: &FiberSpec, pump: &PumpConfig, offset: f64) -> Result<f64> {
    PairGenerator::new(fiber, pump)?.density(offset)
}

pub fn bandwidth_integral(fiber: &FiberSpec, pump: &PumpConfig, opts: &GridOptions) -> Result<f64> {
    PairGenerator::new(fiber, pump)?.bandwidth(opts)
}

pub fn conversion_efficiency(
    fiber: &FiberSpec,
    pump: &PumpConfig,
    opts: &GridOptions,
) -> Result<EfficiencyReport> {
    PairGenerator::new(fiber, pump)?.efficiency(opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub offset: f64,
    pub omega: f64,
    pub density: f64,
    pub is_pump: bool,
}

/// Pair spectral density on a grid, pump bins zeroed.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bin_width: f64,
    pub rows: Vec<SpectrumRow>,
}

impl Spectrum {
    pub const CSV_HEADER: [&'static str; 4] = [
        "lambda_nm",
        "omega_rad_per_s",
        "spectral_density",
        "is_pump_bin",
    ];

    pub fn peak(&self) -> f64 {
        self.rows.iter().map(|r| r.density).fold(0.0, f64::max)
    }

    /// Regions above half the global maximum, edges linearly interpolated.
    pub fn half_max_lobes(&self) -> Vec<Lobe> {
        let half = 0.5 * self.peak();
        if half <= 0.0 {
            return Vec::new();
        }
        let r = &self.rows;
        let cross = |j: usize| {
            let (a, b) = (r[j].density, r[j + 1].density);
            let t = if a != b { (half - a) / (b - a) } else { 0.5 };
            r[j].offset + t.clamp(0.0, 1.0) * (r[j + 1].offset - r[j].offset)
        };
        let mut out = Vec::new();
        let mut start = None;
        for j in 0..r.len() {
            let above = r[j].density >= half;
            match (start, above) {
                (None, true) => start = Some(if j == 0 { r[0].offset } else { cross(j - 1) }),
                (Some(lo), false) => {
                    out.push(Lobe {
                        lo,
                        hi: cross(j - 1),
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(lo) = start {
            out.push(Lobe {
                lo,
                hi: r[r.len() - 1].offset,
            });
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| FwmError::Table(e.to_string());
        w.write_record(Self::CSV_HEADER).map_err(io)?;
        for row in &self.rows {
            let lambda_nm = omega_to_wavelength(row.omega)? * 1e9;
            w.write_record([
                format!("{lambda_nm:e}"),
                format!("{:e}", row.omega),
                format!("{:e}", row.density),
                u8::from(row.is_pump).to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| FwmError::Table(e.to_string()))
    }
}
