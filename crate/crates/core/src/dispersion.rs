//! Propagation-constant models β(ω) and their derivatives.
//!
//! Taylor models return β relative to an arbitrary constant; only
//! differences of β enter the phase mismatch.

use std::io::Read;
use std::path::Path;

use crate::error::{FwmError, Result};
use crate::roots::bisect;
use crate::spline::CubicSpline;
use crate::units::{AngularFrequency, SPEED_OF_LIGHT};

/// Largest birefringence accepted as physical.
pub const MAX_BIREFRINGENCE: f64 = 1e-2;

/// Relative β₂ tolerance for the zero-dispersion search.
pub const ZDW_REL_TOL: f64 = 1e-6;

/// Closed frequency interval in rad/s where a model may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyWindow {
    pub lo: f64,
    pub hi: f64,
}

impl FrequencyWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(FwmError::Domain(format!(
                "invalid frequency window [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Default validity window for expansions about `center`: ±50%.
    pub fn around(center: AngularFrequency) -> Self {
        let w = center.value();
        Self {
            lo: 0.5 * w,
            hi: 1.5 * w,
        }
    }

    pub fn contains(&self, omega: f64) -> bool {
        omega >= self.lo && omega <= self.hi
    }

    pub fn check(&self, omega: f64) -> Result<()> {
        if self.contains(omega) {
            Ok(())
        } else {
            Err(FwmError::OutOfWindow {
                omega,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// A dispersion model: β(ω) in 1/m and its derivatives in sⁿ/m.
pub trait DispersionModel {
    fn window(&self) -> FrequencyWindow;

    fn beta(&self, omega: f64) -> Result<f64>;

    /// n-th derivative of β at `omega`, for n in 1..=4.
    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64>;
}

fn check_order(order: u8) -> Result<()> {
    if (1..=4).contains(&order) {
        Ok(())
    } else {
        Err(FwmError::Domain(format!(
            "derivative order {order} not supported (1..=4)"
        )))
    }
}

/// Even-order expansion β₂Ω²/2 + β₄Ω⁴/24 about ω₀.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenTaylorDispersion {
    pub omega_0: AngularFrequency,
    pub beta2: f64,
    pub beta4: f64,
    window: FrequencyWindow,
}

impl EvenTaylorDispersion {
    pub fn new(omega_0: AngularFrequency, beta2: f64, beta4: f64) -> Result<Self> {
        if !(beta2.is_finite() && beta4.is_finite()) {
            return Err(FwmError::Domain("non-finite dispersion coefficient".into()));
        }
        Ok(Self {
            omega_0,
            beta2,
            beta4,
            window: FrequencyWindow::around(omega_0),
        })
    }

    pub fn with_window(mut self, window: FrequencyWindow) -> Result<Self> {
        if !window.contains(self.omega_0.value()) {
            return Err(FwmError::Domain(
                "window must contain the expansion point".into(),
            ));
        }
        self.window = window;
        Ok(self)
    }
}

impl DispersionModel for EvenTaylorDispersion {
    fn window(&self) -> FrequencyWindow {
        self.window
    }

    fn beta(&self, omega: f64) -> Result<f64> {
        self.window.check(omega)?;
        let o2 = (omega - self.omega_0.value()).powi(2);
        Ok(self.beta2 * o2 / 2.0 + self.beta4 * o2 * o2 / 24.0)
    }

    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64> {
        check_order(order)?;
        self.window.check(omega)?;
        let o = omega - self.omega_0.value();
        Ok(match order {
            1 => self.beta2 * o + self.beta4 * o * o * o / 6.0,
            2 => self.beta2 + self.beta4 * o * o / 2.0,
            3 => self.beta4 * o,
            _ => self.beta4,
        })
    }
}

/// Degree-4 polynomial in (ω − ω_ref).
#[derive(Debug, Clone, PartialEq)]
pub struct FullTaylorDispersion {
    pub omega_ref: AngularFrequency,
    /// β₀..β₄ in 1/m, s/m, s²/m, s³/m, s⁴/m.
    pub coefficients: [f64; 5],
    window: FrequencyWindow,
}

impl FullTaylorDispersion {
    pub fn new(omega_ref: AngularFrequency, coefficients: [f64; 5]) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(FwmError::Domain("non-finite dispersion coefficient".into()));
        }
        Ok(Self {
            omega_ref,
            coefficients,
            window: FrequencyWindow::around(omega_ref),
        })
    }

    pub fn with_window(mut self, window: FrequencyWindow) -> Result<Self> {
        if !window.contains(self.omega_ref.value()) {
            return Err(FwmError::Domain(
                "window must contain the expansion point".into(),
            ));
        }
        self.window = window;
        Ok(self)
    }
}

impl DispersionModel for FullTaylorDispersion {
    fn window(&self) -> FrequencyWindow {
        self.window
    }

    fn beta(&self, omega: f64) -> Result<f64> {
        self.window.check(omega)?;
        let o = omega - self.omega_ref.value();
        let [b0, b1, b2, b3, b4] = self.coefficients;
        Ok(b0 + o * (b1 + o * (b2 / 2.0 + o * (b3 / 6.0 + o * b4 / 24.0))))
    }

    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64> {
        check_order(order)?;
        self.window.check(omega)?;
        let o = omega - self.omega_ref.value();
        let [_, b1, b2, b3, b4] = self.coefficients;
        Ok(match order {
            1 => b1 + o * (b2 + o * (b3 / 2.0 + o * b4 / 6.0)),
            2 => b2 + o * (b3 + o * b4 / 2.0),
            3 => b3 + o * b4,
            _ => b4,
        })
    }
}

/// Material dispersion of the fast axis plus a constant index offset
/// δn = n_slow − n_fast on the slow axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BirefringentDispersion {
    pub base: Box<Dispersion>,
    pub delta_n: f64,
}

impl BirefringentDispersion {
    pub fn new(base: Dispersion, delta_n: f64) -> Result<Self> {
        if !delta_n.is_finite() || delta_n.abs() >= MAX_BIREFRINGENCE {
            return Err(FwmError::Domain(format!(
                "birefringence {delta_n} outside |δn| < {MAX_BIREFRINGENCE}"
            )));
        }
        if matches!(base, Dispersion::Birefringent(_)) {
            return Err(FwmError::Domain("nested birefringent models".into()));
        }
        Ok(Self {
            base: Box::new(base),
            delta_n,
        })
    }

    /// β on the slow axis: β_fast + δn·ω/c.
    pub fn slow_axis_beta(&self, omega: f64) -> Result<f64> {
        Ok(self.base.beta(omega)? + self.delta_n * omega / SPEED_OF_LIGHT)
    }
}

impl DispersionModel for BirefringentDispersion {
    fn window(&self) -> FrequencyWindow {
        self.base.window()
    }

    fn beta(&self, omega: f64) -> Result<f64> {
        self.base.beta(omega)
    }

    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64> {
        self.base.beta_derivative(omega, order)
    }
}

/// Minimum number of table rows.
pub const MIN_TABLE_SAMPLES: usize = 5;

/// Measured β(ω) samples, cubic-spline interpolated; derivatives by
/// centred five-point differences of the spline.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDispersion {
    spline: CubicSpline,
    step: f64,
}

impl TabulatedDispersion {
    pub fn new(omegas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if omegas.len() < MIN_TABLE_SAMPLES {
            return Err(FwmError::Table(format!(
                "need at least {MIN_TABLE_SAMPLES} samples, got {}",
                omegas.len()
            )));
        }
        if omegas[0] <= 0.0 {
            return Err(FwmError::Table("frequencies must be positive".into()));
        }
        let spline = CubicSpline::new(omegas, betas)?;
        let step = 0.5
            * spline
                .knots()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
        Ok(Self { spline, step })
    }

    /// Reads `omega_rad_per_s,beta_per_m` CSV with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| FwmError::Table(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "omega_rad_per_s" || &headers[1] != "beta_per_m" {
            return Err(FwmError::Table(
                "header must be `omega_rad_per_s,beta_per_m`".into(),
            ));
        }
        let mut omegas = Vec::new();
        let mut betas = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| FwmError::Table(e.to_string()))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| FwmError::Table(format!("row {}: {e}", i + 2)))
            };
            if record.len() != 2 {
                return Err(FwmError::Table(format!(
                    "row {}: expected 2 columns",
                    i + 2
                )));
            }
            omegas.push(parse(&record[0])?);
            betas.push(parse(&record[1])?);
        }
        Self::new(omegas, betas)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| FwmError::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (self.spline.knots(), self.spline.values())
    }

    /// Finite-difference step, half the smallest sample spacing.
    pub fn step(&self) -> f64 {
        self.step
    }

    fn at(&self, omega: f64) -> Result<f64> {
        self.spline.eval(omega).ok_or_else(|| {
            let (lo, hi) = self.spline.domain();
            FwmError::OutOfWindow { omega, lo, hi }
        })
    }
}

impl DispersionModel for TabulatedDispersion {
    fn window(&self) -> FrequencyWindow {
        let (lo, hi) = self.spline.domain();
        FrequencyWindow { lo, hi }
    }

    fn beta(&self, omega: f64) -> Result<f64> {
        self.at(omega)
    }

    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64> {
        check_order(order)?;
        let h = self.step;
        let (lo, hi) = self.spline.domain();
        if omega - 2.0 * h < lo || omega + 2.0 * h > hi {
            return Err(FwmError::OutOfWindow {
                omega,
                lo: lo + 2.0 * h,
                hi: hi - 2.0 * h,
            });
        }
        let m2 = self.at(omega - 2.0 * h)?;
        let m1 = self.at(omega - h)?;
        let p1 = self.at(omega + h)?;
        let p2 = self.at(omega + 2.0 * h)?;
        Ok(match order {
            1 => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
            2 => {
                let c = self.at(omega)?;
                (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h)
            }
            3 => (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h),
            _ => {
                let c = self.at(omega)?;
                (m2 - 4.0 * m1 + 6.0 * c - 4.0 * p1 + p2) / (h * h * h * h)
            }
        })
    }
}

/// Any of the supported dispersion models.
#[derive(Debug, Clone, PartialEq)]
pub enum Dispersion {
    EvenTaylor(EvenTaylorDispersion),
    FullTaylor(FullTaylorDispersion),
    Birefringent(BirefringentDispersion),
    Tabulated(TabulatedDispersion),
}

impl Dispersion {
    /// δn when the model carries a birefringent slow axis.
    pub fn delta_n(&self) -> Option<f64> {
        match self {
            Dispersion::Birefringent(b) => Some(b.delta_n),
            _ => None,
        }
    }

    /// (β₂, β₄) when the underlying model is an even Taylor expansion about
    /// `omega_0`.
    pub fn even_taylor_about(&self, omega_0: f64) -> Option<(f64, f64)> {
        match self {
            Dispersion::EvenTaylor(m) if (m.omega_0.value() - omega_0).abs() <= 1e-12 * omega_0 => {
                Some((m.beta2, m.beta4))
            }
            Dispersion::Birefringent(b) => b.base.even_taylor_about(omega_0),
            _ => None,
        }
    }

    fn inner(&self) -> &dyn DispersionModel {
        match self {
            Dispersion::EvenTaylor(m) => m,
            Dispersion::FullTaylor(m) => m,
            Dispersion::Birefringent(m) => m,
            Dispersion::Tabulated(m) => m,
        }
    }
}

impl DispersionModel for Dispersion {
    fn window(&self) -> FrequencyWindow {
        self.inner().window()
    }

    fn beta(&self, omega: f64) -> Result<f64> {
        self.inner().beta(omega)
    }

    fn beta_derivative(&self, omega: f64, order: u8) -> Result<f64> {
        self.inner().beta_derivative(omega, order)
    }
}

impl From<EvenTaylorDispersion> for Dispersion {
    fn from(m: EvenTaylorDispersion) -> Self {
        Dispersion::EvenTaylor(m)
    }
}

impl From<FullTaylorDispersion> for Dispersion {
    fn from(m: FullTaylorDispersion) -> Self {
        Dispersion::FullTaylor(m)
    }
}

impl From<BirefringentDispersion> for Dispersion {
    fn from(m: BirefringentDispersion) -> Self {
        Dispersion::Birefringent(m)
    }
}

impl From<TabulatedDispersion> for Dispersion {
    fn from(m: TabulatedDispersion) -> Self {
        Dispersion::Tabulated(m)
    }
}

/// Zero-dispersion frequency inside `(omega_lo, omega_hi)` by bisection on β₂.
pub fn find_zdw<M: DispersionModel + ?Sized>(
    model: &M,
    omega_lo: f64,
    omega_hi: f64,
) -> Result<AngularFrequency> {
    let root = bisect(
        |w| model.beta_derivative(w, 2),
        omega_lo,
        omega_hi,
        ZDW_REL_TOL,
    )?;
    AngularFrequency::new(root)
}
