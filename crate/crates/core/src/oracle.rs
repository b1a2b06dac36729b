//! Brute-force evolution of one weak-pump photon coupled to M pair modes.
//!
//! With a single photon in pump 2 the reachable space is the photon itself
//! plus one pair in any mode, so M+1 amplitudes describe the state exactly.
//! Phases e^{∓iKz} stay in the couplings (interaction picture).

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{FwmError, Result};
use crate::pairgen::sinc;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// g_m = 2γ√(P₁P₂), 1/m.
    pub couplings: Vec<f64>,
    /// K_m, 1/m.
    pub mismatches: Vec<f64>,
    pub length: f64,
    pub step: f64,
}

/// RK4 norm drift falls as h⁵; at a quarter of the admissible step it stays
/// below 1e-11 even at gL ~ 1 with |K|L ~ 20.
pub const DEFAULT_STEP_FRACTION: f64 = 0.25;

/// g = 2γ√(P₁P₂).
pub fn coupling_from_powers(gamma: f64, p1: f64, p2: f64) -> Result<f64> {
    if !(p1 >= 0.0 && p2 >= 0.0 && gamma.is_finite()) {
        return Err(FwmError::Domain("powers must be >= 0".into()));
    }
    Ok(2.0 * gamma * (p1 * p2).sqrt())
}

/// Largest admissible step: min(0.01/max|g|, 0.1/max|K|, L/100).
pub fn max_step(couplings: &[f64], mismatches: &[f64], length: f64) -> f64 {
    let gmax = couplings.iter().fold(0.0f64, |a, g| a.max(g.abs()));
    let kmax = mismatches.iter().fold(0.0f64, |a, k| a.max(k.abs()));
    let mut h = length / 100.0;
    if gmax > 0.0 {
        h = h.min(0.01 / gmax);
    }
    if kmax > 0.0 {
        h = h.min(0.1 / kmax);
    }
    h
}

impl OracleConfig {
    /// Config at the default step, a fraction of the largest admissible one.
    pub fn new(couplings: Vec<f64>, mismatches: Vec<f64>, length: f64) -> Result<Self> {
        let step = max_step(&couplings, &mismatches, length) * DEFAULT_STEP_FRACTION;
        let cfg = OracleConfig {
            couplings,
            mismatches,
            length,
            step,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    /// M modes with equal coupling and K_m·L/2 at the centers of M equal
    /// cells spanning ±`lobes`·π, scaled so the first-order total is `eta`.
    pub fn spanning_lobes(modes: usize, lobes: f64, eta: f64, length: f64) -> Result<Self> {
        if modes == 0 || !(lobes > 0.0) || !(eta >= 0.0) || !(length > 0.0) {
            return Err(FwmError::Domain(
                "need modes >= 1, lobes > 0, eta >= 0, length > 0".into(),
            ));
        }
        let cell = 2.0 * lobes * PI / modes as f64;
        let mismatches: Vec<f64> = (0..modes)
            .map(|m| 2.0 * (-lobes * PI + (m as f64 + 0.5) * cell) / length)
            .collect();
        let weight: f64 = mismatches
            .iter()
            .map(|k| sinc(0.5 * k * length).powi(2))
            .sum();
        let g = (eta / weight).sqrt() / length;
        Self::new(vec![g; modes], mismatches, length)
    }

    pub fn mode_count(&self) -> usize {
        self.couplings.len()
    }

    pub fn max_step(&self) -> f64 {
        max_step(&self.couplings, &self.mismatches, self.length)
    }

    pub fn validate(&self) -> Result<()> {
        if self.couplings.is_empty() || self.couplings.len() != self.mismatches.len() {
            return Err(FwmError::Domain(
                "couplings and mismatches must be non-empty and of equal length".into(),
            ));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(FwmError::Domain("length must be positive".into()));
        }
        if self
            .couplings
            .iter()
            .chain(&self.mismatches)
            .any(|v| !v.is_finite())
        {
            return Err(FwmError::Domain(
                "couplings and mismatches must be finite".into(),
            ));
        }
        let max = self.max_step();
        if !(self.step > 0.0) || self.step > max * (1.0 + 1e-12) {
            return Err(FwmError::StepTooLarge {
                step: self.step,
                max_step: max,
            });
        }
        Ok(())
    }

    /// |c_m|² to first order: g_m²L²sinc²(K_mL/2).
    pub fn first_order_probabilities(&self) -> Vec<f64> {
        let l = self.length;
        self.couplings
            .iter()
            .zip(&self.mismatches)
            .map(|(g, k)| (g * l).powi(2) * sinc(0.5 * k * l).powi(2))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    /// c₀: the weak photon is still there.
    pub amplitude_p2: Complex64,
    /// c_m: one pair in mode m.
    pub amplitudes_pairs: Vec<Complex64>,
}

impl OracleState {
    pub fn initial(modes: usize) -> Self {
        OracleState {
            amplitude_p2: Complex64::new(1.0, 0.0),
            amplitudes_pairs: vec![Complex64::new(0.0, 0.0); modes],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitude_p2.norm_sqr()
            + self
                .amplitudes_pairs
                .iter()
                .map(|c| c.norm_sqr())
                .sum::<f64>()
    }
}

struct Rhs<'a> {
    g: &'a [f64],
    k: &'a [f64],
}

impl Rhs<'_> {
    fn eval(
        &self,
        z: f64,
        c0: Complex64,
        cm: &[Complex64],
        d0: &mut Complex64,
        dm: &mut [Complex64],
    ) {
        let i = Complex64::i();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..cm.len() {
            let phase = Complex64::from_polar(1.0, -self.k[m] * z);
            dm[m] = i * self.g[m] * phase * c0;
            acc += self.g[m] * phase.conj() * cm[m];
        }
        *d0 = i * acc;
    }
}

/// Fixed-step RK4 from z = 0 to L with the photon initially in pump 2.
pub fn evolve(config: &OracleConfig) -> Result<OracleState> {
    config.validate()?;
    let n_modes = config.mode_count();
    let steps = (config.length / config.step).ceil().max(1.0) as usize;
    let h = config.length / steps as f64;
    let rhs = Rhs {
        g: &config.couplings,
        k: &config.mismatches,
    };

    let mut c0 = Complex64::new(1.0, 0.0);
    let mut cm = vec![Complex64::new(0.0, 0.0); n_modes];
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1m, mut k2m, mut k3m, mut k4m) = (
        vec![zero; n_modes],
        vec![zero; n_modes],
        vec![zero; n_modes],
        vec![zero; n_modes],
    );
    let (mut k10, mut k20, mut k30, mut k40) = (zero, zero, zero, zero);
    let mut tmp = vec![zero; n_modes];

    for s in 0..steps {
        let z = s as f64 * h;
        rhs.eval(z, c0, &cm, &mut k10, &mut k1m);

        for m in 0..n_modes {
            tmp[m] = cm[m] + 0.5 * h * k1m[m];
        }
        rhs.eval(z + 0.5 * h, c0 + 0.5 * h * k10, &tmp, &mut k20, &mut k2m);

        for m in 0..n_modes {
            tmp[m] = cm[m] + 0.5 * h * k2m[m];
        }
        rhs.eval(z + 0.5 * h, c0 + 0.5 * h * k20, &tmp, &mut k30, &mut k3m);

        for m in 0..n_modes {
            tmp[m] = cm[m] + h * k3m[m];
        }
        rhs.eval(z + h, c0 + h * k30, &tmp, &mut k40, &mut k4m);

        c0 += h / 6.0 * (k10 + 2.0 * k20 + 2.0 * k30 + k40);
        for m in 0..n_modes {
            cm[m] += h / 6.0 * (k1m[m] + 2.0 * k2m[m] + 2.0 * k3m[m] + k4m[m]);
        }
    }

    Ok(OracleState {
        amplitude_p2: c0,
        amplitudes_pairs: cm,
    })
}

/// |c_m|² per mode.
pub fn pair_probability_spectrum(state: &OracleState) -> Vec<f64> {
    state
        .amplitudes_pairs
        .iter()
        .map(|c| c.norm_sqr())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderComparison {
    pub exact: Vec<f64>,
    pub first_order: Vec<f64>,
    /// Over modes with a non-zero first-order probability.
    pub max_relative_deviation: f64,
    pub total_exact: f64,
    pub total_first_order: f64,
    pub unitarity_drift: f64,
}

pub fn compare_first_order(config: &OracleConfig) -> Result<FirstOrderComparison> {
    let state = evolve(config)?;
    let exact = pair_probability_spectrum(&state);
    let first_order = config.first_order_probabilities();
    let max_relative_deviation = exact
        .iter()
        .zip(&first_order)
        .filter(|(_, f)| **f > 0.0)
        .map(|(e, f)| ((e - f) / f).abs())
        .fold(0.0, f64::max);
    Ok(FirstOrderComparison {
        total_exact: exact.iter().sum(),
        total_first_order: first_order.iter().sum(),
        exact,
        first_order,
        max_relative_deviation,
        unitarity_drift: (state.norm_sqr() - 1.0).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionPoint {
    pub eta: f64,
    pub coupling: f64,
    pub exact_probability: f64,
}

/// Exact conversion probability against first-order η for M identical modes
/// sharing mismatch K.
pub fn correction_curve(
    etas: &[f64],
    modes: usize,
    mismatch: f64,
    length: f64,
) -> Result<Vec<CorrectionPoint>> {
    if modes == 0 {
        return Err(FwmError::Domain("need at least one mode".into()));
    }
    let shape = sinc(0.5 * mismatch * length).powi(2);
    etas.iter()
        .map(|&eta| {
            if !(eta.is_finite() && eta >= 0.0) {
                return Err(FwmError::Domain(format!("eta must be >= 0, got {eta}")));
            }
            if eta > 0.0 && shape == 0.0 {
                return Err(FwmError::Domain("mismatch sits on a sinc null".into()));
            }
            let coupling = if eta == 0.0 {
                0.0
            } else {
                (eta / (modes as f64 * shape)).sqrt() / length
            };
            let cfg = OracleConfig::new(vec![coupling; modes], vec![mismatch; modes], length)?;
            let exact_probability = pair_probability_spectrum(&evolve(&cfg)?).iter().sum();
            Ok(CorrectionPoint {
                eta,
                coupling,
                exact_probability,
            })
        })
        .collect()
}

pub const CSV_HEADER: [&str; 3] = ["mode_index", "k_per_m", "probability"];

pub fn write_csv<W: Write>(out: W, config: &OracleConfig, probabilities: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| FwmError::Table(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for (m, (k, p)) in config.mismatches.iter().zip(probabilities).enumerate() {
        w.write_record([m.to_string(), format!("{k:e}"), format!("{p:e}")])
            .map_err(err)?;
    }
    w.flush().map_err(|e| FwmError::Table(e.to_string()))
}
