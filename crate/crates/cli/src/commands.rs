//! Subcommand bodies. Each returns the data written to `--out` (or stdout)
//! and a short human-readable summary.

use std::fmt::Write as _;

use rayon::prelude::*;

use fwm_core::oracle::{self, OracleConfig};
use fwm_core::units::AngularFrequency;
use fwm_core::{
    birefringent_roots, find_zdw, required_pump_power, roots_in, EfficiencyReport, FwmError,
    PairGenerator, Result,
};

use crate::scenario::Scenario;

/// Samples used when scanning K for sign changes between the pumps.
const ROOT_SCAN_SAMPLES: usize = 4000;

pub struct Output {
    pub body: Vec<u8>,
    pub summary: String,
}

fn nm(omega: f64) -> Result<f64> {
    Ok(AngularFrequency::new(omega)?.wavelength_nm())
}

fn join_nm(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.3}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn spectrum(s: &Scenario) -> Result<Output> {
    let gen = PairGenerator::new(&s.fiber, &s.pump)?;
    let grid = gen.display_grid(&s.grid)?;
    let spec = gen.spectrum(&grid)?;
    let mut body = Vec::new();
    spec.write_csv(&mut body)?;

    let mut centers = Vec::new();
    for lobe in spec.half_max_lobes() {
        centers.push(nm(grid.center + lobe.center())?);
    }
    centers.sort_by(f64::total_cmp);
    Ok(Output {
        body,
        summary: format!(
            "{}: {} bins of {:.4e} rad/s, peak density {:.4e}, half-max lobes at {} nm",
            s.label,
            grid.len(),
            grid.bin_width,
            spec.peak(),
            join_nm(&centers)
        ),
    })
}

pub fn phasematch(s: &Scenario) -> Result<Output> {
    let gen = PairGenerator::new(&s.fiber, &s.pump)?;
    let ctx = &gen.ctx;
    let w0 = ctx.omega_0.value();
    let mut out = String::new();
    let mut summary = format!("{}:", s.label);

    writeln!(out, "label = {}", s.label).unwrap();
    writeln!(out, "omega_0_rad_per_s = {w0:.9e}").unwrap();
    writeln!(out, "lambda_0_nm = {:.4}", nm(w0)?).unwrap();
    writeln!(out, "delta_omega_rad_per_s = {:.9e}", ctx.delta_omega).unwrap();
    writeln!(out, "p1_peak_w = {:.6e}", ctx.p1_peak).unwrap();
    let k0 = ctx.total_mismatch(0.0)?;
    writeln!(out, "mismatch_at_center_per_m = {k0:.6e}").unwrap();
    write!(summary, " K(0) = {k0:.4e} 1/m").unwrap();

    match required_pump_power(ctx) {
        Ok(p) => {
            writeln!(out, "required_p1_peak_w = {p:.6e}").unwrap();
            write!(summary, ", P1 for K(0)=0: {p:.4} W").unwrap();
        }
        Err(FwmError::IncompatibleDispersion(msg)) => {
            writeln!(out, "required_p1_peak_w = none ({msg})").unwrap();
        }
        Err(e) => return Err(e),
    }

    if ctx.birefringent_term.is_some() {
        let roots = birefringent_roots(ctx)?;
        let mut wl = roots
            .iter()
            .map(|o| nm(w0 + o))
            .collect::<Result<Vec<_>>>()?;
        wl.sort_by(f64::total_cmp);
        writeln!(out, "birefringent_roots_nm = {}", join_nm(&wl)).unwrap();
        write!(summary, ", birefringent roots {} nm", join_nm(&wl)).unwrap();
    }

    let edge = ctx.delta_omega * (1.0 - 1e-6);
    if edge > 0.0 {
        let roots = roots_in(ctx, -edge, edge, ROOT_SCAN_SAMPLES)?;
        let mut wl = roots
            .iter()
            .map(|o| nm(w0 + o))
            .collect::<Result<Vec<_>>>()?;
        wl.sort_by(f64::total_cmp);
        writeln!(out, "mismatch_roots_nm = {}", join_nm(&wl)).unwrap();
        if wl.is_empty() {
            write!(summary, ", no K = 0 crossing between the pumps").unwrap();
        } else {
            write!(summary, ", K = 0 at {} nm", join_nm(&wl)).unwrap();
        }
    }

    match s.fiber.walkoff_length(
        s.pump.pulse_duration,
        s.pump.omega_p1()?,
        s.pump.omega_p2()?,
    ) {
        Ok(l) => {
            writeln!(out, "walkoff_length_m = {l:.6e}").unwrap();
            write!(summary, ", walk-off {l:.4} m").unwrap();
        }
        Err(e) if !e.is_numerical() => {}
        Err(e) => return Err(e),
    }

    if let Some((lo, hi)) = s.zdw_bracket {
        let z = find_zdw(&*s.fiber.dispersion, lo, hi)?;
        writeln!(out, "zdw_nm = {:.4}", z.wavelength_nm()).unwrap();
        write!(summary, ", ZDW {:.2} nm", z.wavelength_nm()).unwrap();
    }

    Ok(Output {
        body: out.into_bytes(),
        summary,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6e}"))
}

pub fn efficiency_report(s: &Scenario) -> Result<EfficiencyReport> {
    PairGenerator::new(&s.fiber, &s.pump)?.efficiency(&s.grid)
}

pub fn efficiency(s: &Scenario) -> Result<Output> {
    let r = efficiency_report(s)?;
    let mut out = String::new();
    writeln!(out, "label = {}", s.label).unwrap();
    writeln!(out, "regime = {}", r.regime).unwrap();
    writeln!(out, "eta = {:.6e}", r.eta).unwrap();
    writeln!(out, "eta_corrected = {:.6e}", r.eta_corrected).unwrap();
    writeln!(out, "error_bound = {:.6e}", r.error_bound).unwrap();
    writeln!(out, "pairs_per_pulse = {}", opt(r.pairs_per_pulse)).unwrap();
    writeln!(out, "pairs_per_second = {:.6e}", r.pairs_per_second).unwrap();
    writeln!(out, "bandwidth_rad_per_s = {:.6e}", r.bandwidth).unwrap();
    writeln!(out, "bin_width_rad_per_s = {:.6e}", r.bin_width).unwrap();
    writeln!(out, "p1_peak_w = {:.6e}", r.p1_peak).unwrap();
    writeln!(out, "gain_parameter = {:.6e}", r.gain_parameter).unwrap();
    writeln!(out, "walkoff_length_m = {}", opt(r.walkoff_length)).unwrap();
    for w in &r.warnings {
        writeln!(out, "warning = {w}").unwrap();
    }
    let mut summary = format!(
        "{}: eta = {:.3e}, pairs/s = {:.3e}, bandwidth = {:.3e} rad/s",
        s.label, r.eta, r.pairs_per_second, r.bandwidth
    );
    if !r.warnings.is_empty() {
        write!(summary, " ({} warning(s))", r.warnings.len()).unwrap();
    }
    Ok(Output {
        body: out.into_bytes(),
        summary,
    })
}

/// Scenario parameters the sweep can vary, in scenario-file units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    P1Avg,
    Length,
    Gamma,
    Alpha,
    DeltaN,
    PulseDuration,
    FRep,
    PhotonsPerPulseP2,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        SweepParam::P1Avg,
        SweepParam::Length,
        SweepParam::Gamma,
        SweepParam::Alpha,
        SweepParam::DeltaN,
        SweepParam::PulseDuration,
        SweepParam::FRep,
        SweepParam::PhotonsPerPulseP2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::P1Avg => "p1_avg",
            SweepParam::Length => "length",
            SweepParam::Gamma => "gamma",
            SweepParam::Alpha => "alpha",
            SweepParam::DeltaN => "delta_n",
            SweepParam::PulseDuration => "pulse_duration",
            SweepParam::FRep => "f_rep",
            SweepParam::PhotonsPerPulseP2 => "photons_per_pulse_p2",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            SweepParam::P1Avg => "pump.p1_avg",
            SweepParam::Length => "fiber.length",
            SweepParam::Gamma => "fiber.gamma",
            SweepParam::Alpha => "fiber.alpha",
            SweepParam::DeltaN => "fiber.delta_n",
            SweepParam::PulseDuration => "pump.pulse_duration",
            SweepParam::FRep => "pump.f_rep",
            SweepParam::PhotonsPerPulseP2 => "pump.photons_per_pulse_p2",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let names: Vec<_> = SweepParam::ALL.iter().map(|p| p.name()).collect();
                FwmError::Config(format!(
                    "unknown sweep parameter `{name}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

pub fn sweep_values(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(FwmError::Config(
            "sweep needs finite bounds and steps >= 1".into(),
        ));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + (to - from) * i as f64 / last
            }
        })
        .collect())
}

/// Evaluates the efficiency at each value concurrently; rows come back in
/// parameter order.
pub fn sweep(s: &Scenario, param: SweepParam, from: f64, to: f64, steps: usize) -> Result<Output> {
    let values = sweep_values(from, to, steps)?;
    let rows: Vec<(f64, EfficiencyReport)> = values
        .par_iter()
        .map(|&v| {
            let point = s.with_value(param.key(), format!("{v:e}"))?;
            let r = efficiency_report(&point).map_err(|e| match e {
                FwmError::Config(m) => FwmError::Config(format!("{} = {v}: {m}", param.name())),
                other => other,
            })?;
            Ok((v, r))
        })
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| FwmError::Table(e.to_string());
    w.write_record([
        param.name(),
        "eta",
        "eta_corrected",
        "pairs_per_pulse",
        "pairs_per_second",
        "bandwidth_rad_per_s",
    ])
    .map_err(io)?;
    for (v, r) in &rows {
        w.write_record([
            format!("{v:e}"),
            format!("{:e}", r.eta),
            format!("{:e}", r.eta_corrected),
            r.pairs_per_pulse
                .map_or_else(String::new, |x| format!("{x:e}")),
            format!("{:e}", r.pairs_per_second),
            format!("{:e}", r.bandwidth),
        ])
        .map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| FwmError::Table(e.to_string()))?;
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (_, r)| {
            (a.min(r.eta), b.max(r.eta))
        });
    Ok(Output {
        body,
        summary: format!(
            "{}: {} points over {} in [{from}, {to}], eta from {lo:.3e} to {hi:.3e}",
            s.label,
            rows.len(),
            param.name()
        ),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub modes: usize,
    pub eta: f64,
    pub lobes: f64,
    pub length: f64,
    pub step: Option<f64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            modes: 32,
            eta: 1e-4,
            lobes: 4.0,
            length: 1.0,
            step: None,
        }
    }
}

/// Multimode comparison against the first-order sinc² result.
pub fn oracle_compare(o: &OracleOptions) -> Result<Output> {
    let mut cfg = OracleConfig::spanning_lobes(o.modes, o.lobes, o.eta, o.length)?;
    if let Some(h) = o.step {
        cfg = cfg.with_step(h)?;
    }
    let r = oracle::compare_first_order(&cfg)?;
    let mut body = Vec::new();
    oracle::write_csv(&mut body, &cfg, &r.exact)?;
    let summary = format!(
        "oracle: modes = {}, lobes = {}, step = {:.4e} m\n\
         total_first_order = {:.6e}\n\
         total_exact = {:.6e}\n\
         max_relative_deviation = {:.3e}\n\
         unitarity_drift = {:.3e}",
        o.modes,
        o.lobes,
        cfg.step,
        r.total_first_order,
        r.total_exact,
        r.max_relative_deviation,
        r.unitarity_drift
    );
    Ok(Output { body, summary })
}

/// Exact single-mode (or M identical modes) probability against η.
pub fn oracle_curve(etas: &[f64], modes: usize, length: f64) -> Result<Output> {
    let pts = oracle::correction_curve(etas, modes, 0.0, length)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| FwmError::Table(e.to_string());
    w.write_record(["eta", "exact_probability", "deviation", "bound_2eta2"])
        .map_err(io)?;
    let mut worst: f64 = 0.0;
    for p in &pts {
        let d = p.eta - p.exact_probability;
        let bound = 2.0 * p.eta * p.eta;
        if bound > 0.0 {
            worst = worst.max(d / bound);
        }
        w.write_record([
            format!("{:e}", p.eta),
            format!("{:e}", p.exact_probability),
            format!("{d:e}"),
            format!("{bound:e}"),
        ])
        .map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| FwmError::Table(e.to_string()))?;
    Ok(Output {
        body,
        summary: format!(
            "oracle curve: {} points, {modes} mode(s), largest deviation / 2eta^2 = {worst:.3}",
            pts.len()
        ),
    })
}
