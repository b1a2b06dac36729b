//! Fiber description and derived lengths.

use std::sync::Arc;

use crate::dispersion::{Dispersion, DispersionModel};
use crate::error::{FwmError, Result};
use crate::units::{AngularFrequency, EPSILON_0, SPEED_OF_LIGHT};

/// Below this α·L′ the effective length uses its series expansion.
const SERIES_THRESHOLD: f64 = 1e-8;

/// γ(ω) = 3χ⁽³⁾ω / (2ε₀c²n²A_eff), in W⁻¹·m⁻¹.
pub fn gamma_from_chi3(chi3: f64, omega: f64, n: f64, a_eff: f64) -> Result<f64> {
    for (name, v) in [("chi3", chi3), ("omega", omega), ("n", n), ("a_eff", a_eff)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(FwmError::Domain(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    Ok(3.0 * chi3 * omega / (2.0 * EPSILON_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT * n * n * a_eff))
}

/// Absorption-corrected interaction length (1 − e^{−αL′})/α.
pub fn effective_length(alpha: f64, physical_length: f64) -> Result<f64> {
    if !(alpha >= 0.0 && physical_length >= 0.0) || !physical_length.is_finite() {
        return Err(FwmError::Domain(format!(
            "effective length needs alpha >= 0 and length >= 0, got {alpha}, {physical_length}"
        )));
    }
    if alpha.is_infinite() {
        return Ok(0.0);
    }
    let x = alpha * physical_length;
    if x < SERIES_THRESHOLD {
        // (1 − e^{−x})/α = L′(1 − x/2 + x²/6 …)
        return Ok(physical_length * (1.0 - 0.5 * x));
    }
    Ok(-(-x).exp_m1() / alpha)
}

/// Distance over which two pulses of duration τ separate by τ.
/// Infinite when the group delays coincide.
pub fn walkoff_length(pulse_duration: f64, beta1_p1: f64, beta1_p2: f64) -> Result<f64> {
    if !(pulse_duration.is_finite() && pulse_duration > 0.0) {
        return Err(FwmError::Domain(format!(
            "pulse duration must be positive, got {pulse_duration}"
        )));
    }
    let diff = (beta1_p1 - beta1_p2).abs();
    let l = pulse_duration / diff;
    Ok(if l.is_finite() { l } else { f64::INFINITY })
}

/// Material parameters from which γ can be computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialNonlinearity {
    /// χ⁽³⁾ in m²/V².
    pub chi3: f64,
    /// Refractive index at `omega_ref`.
    pub n_ref: f64,
    /// Effective mode area in m².
    pub a_eff: f64,
    pub omega_ref: AngularFrequency,
}

impl MaterialNonlinearity {
    pub fn gamma(&self) -> Result<f64> {
        gamma_from_chi3(self.chi3, self.omega_ref.value(), self.n_ref, self.a_eff)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    /// W⁻¹·m⁻¹.
    pub gamma: f64,
    /// Physical length, m.
    pub length: f64,
    /// Absorption coefficient, 1/m.
    pub alpha: f64,
    pub material: Option<MaterialNonlinearity>,
    pub dispersion: Arc<Dispersion>,
}

impl FiberSpec {
    pub fn new(gamma: f64, length: f64, dispersion: impl Into<Arc<Dispersion>>) -> Result<Self> {
        let spec = Self {
            gamma,
            length,
            alpha: 0.0,
            material: None,
            dispersion: dispersion.into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds the fiber with γ computed from material parameters.
    pub fn from_material(
        material: MaterialNonlinearity,
        length: f64,
        dispersion: impl Into<Arc<Dispersion>>,
    ) -> Result<Self> {
        let spec = Self {
            gamma: material.gamma()?,
            length,
            alpha: 0.0,
            material: Some(material),
            dispersion: dispersion.into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_loss(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    /// Attaches material parameters; γ must agree with them.
    pub fn with_material(mut self, material: MaterialNonlinearity) -> Result<Self> {
        self.material = Some(material);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(FwmError::Config(format!(
                "fiber gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(FwmError::Config(format!(
                "fiber length must be > 0, got {}",
                self.length
            )));
        }
        if !(self.alpha >= 0.0) {
            return Err(FwmError::Config(format!(
                "fiber alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if let Some(m) = &self.material {
            let computed = m.gamma()?;
            if ((computed - self.gamma) / computed).abs() > 1e-12 {
                return Err(FwmError::Config(format!(
                    "gamma {} disagrees with chi3/n_ref/a_eff value {computed}",
                    self.gamma
                )));
            }
        }
        Ok(())
    }

    /// Interaction length after absorption.
    pub fn effective_length(&self) -> f64 {
        effective_length(self.alpha, self.length).expect("validated fiber")
    }

    pub fn delta_n(&self) -> Option<f64> {
        self.dispersion.delta_n()
    }

    /// Walk-off length between pump pulses using β₁ of the dispersion model.
    pub fn walkoff_length(
        &self,
        pulse_duration: f64,
        omega_p1: AngularFrequency,
        omega_p2: AngularFrequency,
    ) -> Result<f64> {
        let b1 = self.dispersion.beta_derivative(omega_p1.value(), 1)?;
        let b2 = self.dispersion.beta_derivative(omega_p2.value(), 1)?;
        walkoff_length(pulse_duration, b1, b2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::EvenTaylorDispersion;
    use crate::units::PS2_PER_M;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn flat_dispersion() -> Dispersion {
        EvenTaylorDispersion::new(AngularFrequency::new(1.2e15).unwrap(), 0.0, 0.0)
            .unwrap()
            .into()
    }

    #[test]
    fn gamma_scaling() {
        let w = 1.2e15;
        let g = gamma_from_chi3(1e-20, w, 1.45, 1e-12).unwrap();
        assert!(rel(gamma_from_chi3(1e-20, w, 1.45, 2e-12).unwrap(), g / 2.0) < 1e-15);
        assert!(rel(gamma_from_chi3(2e-20, w, 1.45, 1e-12).unwrap(), 2.0 * g) < 1e-15);
    }

    #[test]
    fn gamma_inverted_for_microwire() {
        // As2Se3-like index and sub-micron area; χ³ fixed by inverting the formula.
        let w = AngularFrequency::from_wavelength_nm(1550.0)
            .unwrap()
            .value();
        let (n, a_eff) = (2.8, 0.25e-12);
        let chi3 = 180.0 * 2.0 * EPSILON_0 * SPEED_OF_LIGHT.powi(2) * n * n * a_eff / (3.0 * w);
        let g = gamma_from_chi3(chi3, w, n, a_eff).unwrap();
        assert!(rel(g, 180.0) < 1e-12);
    }

    #[test]
    fn gamma_rejects_non_positive() {
        assert!(gamma_from_chi3(0.0, 1e15, 1.4, 1e-12).is_err());
        assert!(gamma_from_chi3(1e-20, 1e15, -1.4, 1e-12).is_err());
    }

    #[test]
    fn effective_length_cases() {
        assert_eq!(effective_length(0.0, 0.10).unwrap(), 0.10);
        assert!((effective_length(0.1, 10.0).unwrap() - 6.321).abs() < 1e-3);
        assert!(rel(effective_length(1e9, 1.0).unwrap(), 1e-9) < 1e-12);
        assert!(effective_length(-0.1, 1.0).is_err());
        assert!(effective_length(0.1, -1.0).is_err());
        // Series branch is continuous with the closed form.
        let a = effective_length(1e-9, 1.0).unwrap();
        let b = effective_length(2e-8, 1.0).unwrap();
        assert!(a > b && rel(a, 1.0) < 1e-8);
    }

    #[test]
    fn walkoff_cases() {
        assert!(rel(walkoff_length(2e-12, 0.0, 2e-11).unwrap(), 0.1) < 1e-12);
        assert_eq!(
            walkoff_length(2e-12, 4.9e-9, 4.9e-9).unwrap(),
            f64::INFINITY
        );
        assert!(walkoff_length(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn pm_walkoff_from_dispersion() {
        let p1 = AngularFrequency::from_wavelength_nm(890.0).unwrap();
        let p2 = AngularFrequency::from_wavelength_nm(660.0).unwrap();
        let (w0, dw) = crate::units::pump_midpoint_and_offset(p1, p2);
        let disp: Dispersion = EvenTaylorDispersion::new(w0, 0.040 * PS2_PER_M, 0.0)
            .unwrap()
            .into();
        let fiber = FiberSpec::new(4.6e-3, 0.10, disp).unwrap();
        let l = fiber.walkoff_length(5e-12, p1, p2).unwrap();
        let expected = 5e-12 / (2.0 * 0.040 * PS2_PER_M * dw);
        assert!(rel(l, expected) < 1e-9);
        assert!(rel(l, 0.17) < 0.01);
    }

    #[test]
    fn fiber_validation() {
        assert!(FiberSpec::new(0.0, 1.0, flat_dispersion()).is_err());
        assert!(FiberSpec::new(1.0, 0.0, flat_dispersion()).is_err());
        assert!(FiberSpec::new(1.0, 1.0, flat_dispersion())
            .unwrap()
            .with_loss(-1.0)
            .is_err());

        let material = MaterialNonlinearity {
            chi3: 1e-20,
            n_ref: 1.45,
            a_eff: 1e-12,
            omega_ref: AngularFrequency::new(1.2e15).unwrap(),
        };
        let g = material.gamma().unwrap();
        assert!(FiberSpec::new(g, 1.0, flat_dispersion())
            .unwrap()
            .with_material(material)
            .is_ok());
        assert!(FiberSpec::new(g * 1.001, 1.0, flat_dispersion())
            .unwrap()
            .with_material(material)
            .is_err());
        let from = FiberSpec::from_material(material, 1.0, flat_dispersion()).unwrap();
        assert_eq!(from.gamma, g);
    }

    proptest! {
        #[test]
        fn effective_length_monotone_and_bounded(alpha in 0.0f64..50.0, l in 0.0f64..20.0, dl in 0.0f64..5.0) {
            let a = effective_length(alpha, l).unwrap();
            let b = effective_length(alpha, l + dl).unwrap();
            prop_assert!(b >= a);
            let bound = if alpha > 0.0 { l.min(1.0 / alpha) } else { l };
            prop_assert!(a <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn gamma_homogeneity(k in 0.1f64..10.0) {
            let (chi3, w, n, a) = (1e-20, 1.2e15, 1.45, 1e-12);
            let g = gamma_from_chi3(chi3, w, n, a).unwrap();
            prop_assert!(rel(gamma_from_chi3(k * chi3, w, n, a).unwrap(), k * g) < 1e-13);
            prop_assert!(rel(gamma_from_chi3(chi3, k * w, n, a).unwrap(), k * g) < 1e-13);
            prop_assert!(rel(gamma_from_chi3(chi3, w, n, k * a).unwrap(), g / k) < 1e-13);
            prop_assert!(rel(gamma_from_chi3(chi3, w, k * n, a).unwrap(), g / (k * k)) < 1e-13);
        }
    }
}
