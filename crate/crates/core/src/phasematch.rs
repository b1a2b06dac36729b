//! Total phase mismatch K(Ω) and phasematching solvers.
//!
//! Offsets Ω are measured from the pump midpoint ω₀. Pumps sit at ω₀ ± Δω
//! and generated pairs at ω₀ ± Ω (external pumping, |Ω| < Δω).

use std::sync::Arc;

use crate::dispersion::{Dispersion, DispersionModel};
use crate::error::{FwmError, Result};
use crate::fiber::FiberSpec;
use crate::roots::bisect;
use crate::units::{pump_midpoint_and_offset, AngularFrequency, SPEED_OF_LIGHT};

/// Relative |K| tolerance for [`numeric_root`].
pub const ROOT_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MismatchContext {
    pub omega_0: AngularFrequency,
    /// Pump offset Δω ≥ 0, rad/s.
    pub delta_omega: f64,
    pub gamma: f64,
    /// Strong-pump peak power, W.
    pub p1_peak: f64,
    pub dispersion: Arc<Dispersion>,
    /// 2ω₀δn/c when signal and idler propagate on the slow axis, 1/m.
    pub birefringent_term: Option<f64>,
}

impl MismatchContext {
    pub fn new(
        fiber: &FiberSpec,
        omega_p1: AngularFrequency,
        omega_p2: AngularFrequency,
        p1_peak: f64,
    ) -> Result<Self> {
        let (omega_0, delta_omega) = pump_midpoint_and_offset(omega_p1, omega_p2);
        let ctx = Self {
            omega_0,
            delta_omega,
            gamma: fiber.gamma,
            p1_peak,
            dispersion: Arc::clone(&fiber.dispersion),
            birefringent_term: fiber
                .delta_n()
                .map(|dn| 2.0 * omega_0.value() * dn / SPEED_OF_LIGHT),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p1_peak >= 0.0 && self.p1_peak.is_finite()) {
            return Err(FwmError::Domain(format!(
                "pump peak power must be >= 0, got {}",
                self.p1_peak
            )));
        }
        if !(self.delta_omega >= 0.0) {
            return Err(FwmError::Domain("pump offset must be >= 0".into()));
        }
        let window = self.dispersion.window();
        window.check(self.omega_0.value() - self.delta_omega)?;
        window.check(self.omega_0.value() + self.delta_omega)?;
        Ok(())
    }

    pub fn with_p1_peak(&self, p1_peak: f64) -> Self {
        Self {
            p1_peak,
            ..self.clone()
        }
    }

    /// Self-phase-modulation contribution γP₁.
    pub fn nonlinear_term(&self) -> f64 {
        self.gamma * self.p1_peak
    }

    pub fn omega_p1(&self) -> f64 {
        self.omega_0.value() - self.delta_omega
    }

    pub fn omega_p2(&self) -> f64 {
        self.omega_0.value() + self.delta_omega
    }

    /// Δk from propagation constants: β(ω₀+Ω) + β(ω₀−Ω) − β(ω_p1) − β(ω_p2).
    pub fn linear_mismatch_direct(&self, offset: f64) -> Result<f64> {
        let o = offset.abs();
        let w0 = self.omega_0.value();
        let d = &self.dispersion;
        let pair = d.beta(w0 + o)? + d.beta(w0 - o)?;
        let pumps = d.beta(self.omega_p2())? + d.beta(self.omega_p1())?;
        Ok(pair - pumps)
    }

    /// Δk from the even Taylor form when the model allows it, otherwise
    /// from propagation constants.
    pub fn linear_mismatch(&self, offset: f64) -> Result<f64> {
        let w0 = self.omega_0.value();
        match self.dispersion.even_taylor_about(w0) {
            Some((b2, b4)) => {
                let window = self.dispersion.window();
                window.check(w0 + offset.abs())?;
                window.check(w0 - offset.abs())?;
                let o2 = offset * offset;
                let d2 = self.delta_omega * self.delta_omega;
                Ok(b2 * (o2 - d2) + b4 / 12.0 * (o2 * o2 - d2 * d2))
            }
            None => self.linear_mismatch_direct(offset),
        }
    }

    /// Total mismatch K(Ω) = Δk + γP₁ (+ 2ω₀δn/c).
    pub fn total_mismatch(&self, offset: f64) -> Result<f64> {
        Ok(self.linear_mismatch(offset)?
            + self.nonlinear_term()
            + self.birefringent_term.unwrap_or(0.0))
    }

    /// K at an absolute frequency ω.
    pub fn mismatch_at(&self, omega: f64) -> Result<f64> {
        self.total_mismatch(omega - self.omega_0.value())
    }
}

pub fn total_mismatch(ctx: &MismatchContext, offset: f64) -> Result<f64> {
    ctx.total_mismatch(offset)
}

/// Far-from-ZDW birefringent phasematching: Ω² = Δω² − (2ω₀δn/c)/β₂(ω₀).
///
/// Returns the offsets in ascending order: two roots, one (Ω = 0) or none.
/// Neglects β₄ and γP₁.
pub fn birefringent_roots(ctx: &MismatchContext) -> Result<Vec<f64>> {
    let beta2 = ctx.dispersion.beta_derivative(ctx.omega_0.value(), 2)?;
    if beta2 == 0.0 {
        return Err(FwmError::Degenerate(
            "beta2 vanishes at the pump midpoint; use the numeric root finder".into(),
        ));
    }
    let term = ctx.birefringent_term.unwrap_or(0.0);
    let omega_sq = ctx.delta_omega * ctx.delta_omega - term / beta2;
    Ok(if omega_sq > 0.0 {
        let o = omega_sq.sqrt();
        vec![-o, o]
    } else if omega_sq == 0.0 {
        vec![0.0]
    } else {
        Vec::new()
    })
}

/// Strong-pump peak power giving K(0) = 0.
pub fn required_pump_power(ctx: &MismatchContext) -> Result<f64> {
    let linear = ctx.linear_mismatch(0.0)? + ctx.birefringent_term.unwrap_or(0.0);
    let p = -linear / ctx.gamma;
    if p < 0.0 {
        return Err(FwmError::IncompatibleDispersion(format!(
            "phasematching at the centre needs {p:.4e} W; the dispersion must be positive for external pumping"
        )));
    }
    Ok(p.abs())
}

/// Root of K(Ω) inside `bracket` by bisection.
pub fn numeric_root(ctx: &MismatchContext, bracket: (f64, f64)) -> Result<f64> {
    bisect(
        |o| ctx.total_mismatch(o),
        bracket.0,
        bracket.1,
        ROOT_REL_TOL,
    )
}

/// Every sign change of K on `samples` equal steps across [lo, hi], each
/// refined by bisection. Roots narrower than one step are missed.
pub fn roots_in(ctx: &MismatchContext, lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || samples < 2 {
        return Err(FwmError::Domain(
            "need lo < hi and at least two samples".into(),
        ));
    }
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev = ctx.total_mismatch(lo)?;
    if prev == 0.0 {
        roots.push(lo);
    }
    for j in 1..=samples {
        let x = if j == samples {
            hi
        } else {
            lo + j as f64 * step
        };
        let k = ctx.total_mismatch(x)?;
        if k == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && prev.signum() != k.signum() {
            roots.push(numeric_root(ctx, (prev_x, x))?);
        }
        prev_x = x;
        prev = k;
    }
    Ok(roots)
}

/// Default search interval (0, Δω − exclusion) on the positive-offset side.
pub fn default_bracket(ctx: &MismatchContext, pump_exclusion: f64) -> (f64, f64) {
    (0.0, (ctx.delta_omega - pump_exclusion).max(0.0))
}
