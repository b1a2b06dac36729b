//! Acceptance suite. One [PASS]/[FAIL] line per criterion, nonzero exit on
//! any failure. Run with `cargo test -p fwm-cli --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fwm_cli::{presets, Scenario};
use fwm_core::units::PS2_PER_M;
use fwm_core::{
    birefringent_roots, compare_first_order, correction_curve, omega_to_wavelength,
    required_pump_power, roots_in, AngularFrequency, Dispersion, EvenTaylorDispersion, FiberSpec,
    GridOptions, OracleConfig, PairGenerator, PumpConfig, PumpingRegime,
};

type Outcome = Result<String, String>;

const PRESETS: [&str; 3] = ["pm-silica", "microstructured-silica", "chalc-microwire"];

struct Suite {
    failed: usize,
}

impl Suite {
    fn check(&mut self, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let outcome = f();
        let dt = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if dt <= budget => (true, d),
            Ok(d) => (false, format!("{d}; took {dt:?}, budget {budget:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {name} ({:.3} ms): {detail}",
            dt.as_secs_f64() * 1e3
        );
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_factor(x: f64, target: f64, factor: f64) -> bool {
    x >= target / factor && x <= target * factor
}

fn load(name: &str) -> Result<Scenario, String> {
    presets::load(name).map_err(|e| e.to_string())
}

fn generator(s: &Scenario) -> Result<PairGenerator, String> {
    PairGenerator::new(&s.fiber, &s.pump).map_err(|e| e.to_string())
}

fn nm(omega: f64) -> f64 {
    omega_to_wavelength(omega).expect("positive frequency") * 1e9
}

fn phasematching_power() -> Outcome {
    let pump = PumpConfig {
        lambda_p1: 1620e-9,
        lambda_p2: 1480e-9,
        regime: PumpingRegime::PulsedPulsed,
        p1_avg: 1e-4,
        pulse_duration: 2e-12,
        f_rep: Some(80e6),
        photons_per_pulse_p2: 1.0,
        p2_avg: None,
    };
    let w0 = AngularFrequency::new(
        0.5 * (pump.omega_p1().unwrap().value() + pump.omega_p2().unwrap().value()),
    )
    .unwrap();
    let d: Dispersion = EvenTaylorDispersion::new(w0, 0.05 * PS2_PER_M, 0.0)
        .unwrap()
        .into();
    let fiber = FiberSpec::new(180.0, 0.1, Arc::new(d)).map_err(|e| e.to_string())?;
    let g = PairGenerator::new(&fiber, &pump).map_err(|e| e.to_string())?;
    let p = required_pump_power(&g.ctx).map_err(|e| e.to_string())?;
    ensure((p / 0.84 - 1.0).abs() <= 0.01, || {
        format!("{p:.4} W not 0.84 W ± 1%")
    })?;
    ensure((p / 0.8 - 1.0).abs() <= 0.06, || {
        format!("{p:.4} W more than 6% from 0.8 W")
    })?;
    Ok(format!("P1 = {p:.4} W"))
}

fn preset_rate(name: &str, target: f64, factor: f64) -> Outcome {
    let s = load(name)?;
    let g = generator(&s)?;
    let r = g.efficiency(&s.grid).map_err(|e| e.to_string())?;
    let f_rep = s.pump.f_rep.ok_or("preset has no repetition rate")?;
    let per_pulse = r.pairs_per_pulse.ok_or("no pairs per pulse")?;
    ensure(within_factor(r.pairs_per_second, target, factor), || {
        format!(
            "{:.4e} pairs/s outside x/{factor} of {target:e}",
            r.pairs_per_second
        )
    })?;
    ensure(r.pairs_per_second == f_rep * per_pulse, || {
        format!(
            "rate {:e} != f_rep * pairs_per_pulse {:e}",
            r.pairs_per_second,
            f_rep * per_pulse
        )
    })?;
    let via_eta = f_rep * r.eta * s.pump.photons_per_pulse_p2;
    ensure(
        ((r.pairs_per_second - via_eta) / via_eta).abs() < 1e-15,
        || format!("rate {:e} != f_rep * eta {via_eta:e}", r.pairs_per_second),
    )?;
    Ok(format!(
        "{:.4e} pairs/s, eta = {:.4e}",
        r.pairs_per_second, r.eta
    ))
}

fn pm_roots() -> Outcome {
    let s = load("pm-silica")?;
    let g = generator(&s)?;
    let w0 = g.ctx.omega_0.value();
    let mut closed: Vec<f64> = birefringent_roots(&g.ctx)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|o| nm(w0 + o))
        .collect();
    closed.sort_by(f64::total_cmp);
    let edge = g.ctx.delta_omega * (1.0 - 1e-6);
    let mut numeric: Vec<f64> = roots_in(&g.ctx, -edge, edge, 4000)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|o| nm(w0 + o))
        .collect();
    numeric.sort_by(f64::total_cmp);
    for (label, roots) in [("closed form", &closed), ("with SPM", &numeric)] {
        ensure(roots.len() == 2, || {
            format!("{label}: expected 2 roots, got {roots:?}")
        })?;
        ensure(
            (roots[0] - 728.0).abs() <= 3.0 && (roots[1] - 790.0).abs() <= 3.0,
            || {
                format!(
                    "{label}: {:.3}/{:.3} nm not 728/790 ± 3 nm",
                    roots[0], roots[1]
                )
            },
        )?;
    }
    Ok(format!(
        "closed form {:.3}/{:.3} nm, with SPM {:.3}/{:.3} nm",
        closed[0], closed[1], numeric[0], numeric[1]
    ))
}

fn pm_walkoff() -> Outcome {
    let s = load("pm-silica")?;
    let l = s
        .fiber
        .walkoff_length(
            s.pump.pulse_duration,
            s.pump.omega_p1().map_err(|e| e.to_string())?,
            s.pump.omega_p2().map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
    ensure((l - 0.17).abs() < 0.005, || {
        format!("{l:.4} m does not round to 0.17 m")
    })?;
    ensure((l / 0.18 - 1.0).abs() <= 0.1, || {
        format!("{l:.4} m more than 10% from 0.18 m")
    })?;
    Ok(format!("{l:.4} m"))
}

fn oracle_equivalence() -> Outcome {
    let eta = 1e-4;
    let cfg = OracleConfig::spanning_lobes(32, 4.0, eta, 1.0).map_err(|e| e.to_string())?;
    let r = compare_first_order(&cfg).map_err(|e| e.to_string())?;
    ensure(r.total_first_order <= eta * (1.0 + 1e-12), || {
        format!("first-order total {:e} above {eta:e}", r.total_first_order)
    })?;
    ensure(r.max_relative_deviation < 1e-3, || {
        format!("max relative deviation {:.3e}", r.max_relative_deviation)
    })?;
    ensure(r.unitarity_drift < 1e-10, || {
        format!("unitarity drift {:.3e}", r.unitarity_drift)
    })?;
    Ok(format!(
        "32 modes, max relative deviation {:.3e}, drift {:.1e}",
        r.max_relative_deviation, r.unitarity_drift
    ))
}

fn low_gain_bound() -> Outcome {
    let etas = [1e-6, 1e-4, 1e-3, 1e-2, 0.1];
    let points = correction_curve(&etas, 1, 0.0, 1.0).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for p in &points {
        let dev = p.eta - p.exact_probability;
        ensure(dev >= 0.0 && dev <= 2.0 * p.eta * p.eta, || {
            format!(
                "eta {:e}: deviation {dev:e} outside [0, {:e}]",
                p.eta,
                2.0 * p.eta * p.eta
            )
        })?;
        if p.eta == 1e-3 {
            ensure(dev <= 2e-6, || {
                format!("deviation {dev:e} at eta 1e-3 exceeds 2e-6")
            })?;
        }
        parts.push(format!("{:e}:{dev:.3e}", p.eta));
    }
    Ok(format!("eta:deviation {}", parts.join(" ")))
}

fn symmetry_and_convergence() -> Outcome {
    let mut parts = Vec::new();
    for name in PRESETS {
        let s = load(name)?;
        let g = generator(&s)?;
        let spec = g
            .spectrum(&g.display_grid(&s.grid).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let n = spec.rows.len();
        let mut worst: f64 = 0.0;
        for (a, b) in spec.rows.iter().zip(spec.rows.iter().rev()).take(n / 2) {
            ensure(
                (a.omega + b.omega - 2.0 * g.ctx.omega_0.value()).abs() <= 1e-9 * a.omega,
                || {
                    format!(
                        "{name}: bins at {:e} and {:e} are not conjugate",
                        a.omega, b.omega
                    )
                },
            )?;
            let scale = a.density.max(b.density);
            if scale > 0.0 {
                worst = worst.max((a.density - b.density).abs() / scale);
            }
        }
        ensure(worst <= 1e-9, || format!("{name}: asymmetry {worst:e}"))?;

        let bw = g.bandwidth(&s.grid).map_err(|e| e.to_string())?;
        let half = GridOptions {
            bin_width: Some(0.5 * s.grid.bin_width.unwrap_or(s.pump.pump_linewidth())),
            ..s.grid
        };
        let bw_half = g.bandwidth(&half).map_err(|e| e.to_string())?;
        let change = (bw_half / bw - 1.0).abs();
        ensure(change < 5e-3, || {
            format!("{name}: halving bins moves bandwidth by {change:.3e}")
        })?;
        parts.push(format!("{name} asym {worst:.1e} dbw {change:.1e}"));
    }
    Ok(parts.join(", "))
}

fn regime_algebra() -> Outcome {
    let s = load("chalc-microwire")?;
    let g = generator(&s)?;
    let bw = g.bandwidth(&s.grid).map_err(|e| e.to_string())?;
    let rate = |regime: PumpingRegime| -> Result<f64, String> {
        let t = s
            .with_value("pump.regime", regime.as_str())
            .map_err(|e| e.to_string())?;
        generator(&t)?
            .pairs_per_second(bw)
            .map_err(|e| e.to_string())
    };
    let pp = rate(PumpingRegime::PulsedPulsed)?;
    let pc = rate(PumpingRegime::PulsedCw)?;
    let esp = rate(PumpingRegime::EquivalentSinglePhoton)?;
    let cw = rate(PumpingRegime::CwCw)?;

    let f_rep = s.pump.f_rep.ok_or("no repetition rate")?;
    let linewidth = s.pump.pump_linewidth();
    let expected = f_rep / (linewidth / (2.0 * PI));
    ensure(((pc / pp) / expected - 1.0).abs() < 1e-12, || {
        format!(
            "pulsed_cw/pulsed_pulsed = {:e}, expected {expected:e}",
            pc / pp
        )
    })?;
    ensure((esp / cw - 1.0).abs() < 1e-12, || {
        format!("ESP {esp:e} != cw_cw {cw:e}")
    })?;
    Ok(format!(
        "ratio {:.6e} = f_rep/(dw_p/2pi) = 2pi*f_rep/dw_p with dw_p = {linewidth:.4e} rad/s; ESP = cw_cw = {cw:.4e}",
        pc / pp
    ))
}

fn figure_shapes() -> Outcome {
    let lobes = |name: &str| -> Result<(PairGenerator, Vec<(f64, f64)>), String> {
        let s = load(name)?;
        let g = generator(&s)?;
        let spec = g
            .spectrum(&g.display_grid(&s.grid).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let l = spec
            .half_max_lobes()
            .iter()
            .map(|l| (l.center(), l.width()))
            .collect();
        Ok((g, l))
    };

    let (pm, l) = lobes("pm-silica")?;
    ensure(l.len() == 2, || {
        format!("pm-silica: {} half-max lobes", l.len())
    })?;
    let w0 = pm.ctx.omega_0.value();
    let centers: Vec<f64> = l.iter().map(|(c, _)| nm(w0 + c)).collect();
    let (lo, hi) = (centers[0].min(centers[1]), centers[0].max(centers[1]));
    ensure(
        (lo - 728.0).abs() <= 3.0 && (hi - 790.0).abs() <= 3.0,
        || format!("pm-silica lobes at {lo:.2}/{hi:.2} nm"),
    )?;
    for &(_, w) in &l {
        ensure(within_factor(w, 7e12, 2.0), || {
            format!("pm-silica lobe width {w:.3e}")
        })?;
    }
    let pm_w = l[0].1;

    // phasematched at the ZDW midpoint: one flat-topped lobe around ω₀
    let (_, l) = lobes("microstructured-silica")?;
    ensure(l.len() == 1, || {
        format!("microstructured-silica: {} half-max lobes", l.len())
    })?;
    let (mc, micro_w) = l[0];
    ensure(mc.abs() < 0.05 * micro_w, || {
        format!("microstructured lobe centered at offset {mc:.3e}")
    })?;
    ensure(within_factor(micro_w, 1.6e14, 2.0), || {
        format!("microstructured lobe width {micro_w:.3e}")
    })?;

    let (_, l) = lobes("chalc-microwire")?;
    ensure(l.len() == 1, || {
        format!("chalc-microwire: {} half-max lobes", l.len())
    })?;
    let (c, w) = l[0];
    ensure(c.abs() < 0.05 * w, || {
        format!("chalc lobe centered at offset {c:.3e}, width {w:.3e}")
    })?;

    Ok(format!(
        "pm lobes {lo:.1}/{hi:.1} nm width {pm_w:.2e}, microstructured width {micro_w:.2e}, chalc single lobe width {w:.2e} rad/s"
    ))
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    let ms = Duration::from_millis(1);
    let s = Duration::from_secs(1);

    suite.check("1 phasematching power", ms, phasematching_power);
    for (name, target, factor) in [
        ("pm-silica", 1.6, 10.0),
        ("microstructured-silica", 3.2e4, 3.0),
        ("chalc-microwire", 8.8e4, 2.0),
    ] {
        suite.check(&format!("2 pair rate {name}"), s, || {
            preset_rate(name, target, factor)
        });
    }
    suite.check("3 birefringent roots", ms, pm_roots);
    suite.check("4 walk-off length", ms, pm_walkoff);
    suite.check("5 oracle equivalence", 10 * s, oracle_equivalence);
    suite.check("6 low-gain bound", 5 * s, low_gain_bound);
    suite.check(
        "7 symmetry and convergence",
        5 * s,
        symmetry_and_convergence,
    );
    suite.check("8 regime algebra", s, regime_algebra);
    suite.check("figure shapes", 5 * s, figure_shapes);

    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", suite.failed);
        ExitCode::FAILURE
    }
}
