use fwm_cli::presets;
use fwm_core::{find_zdw, required_pump_power, GridOptions, PairGenerator, PumpingRegime, Warning};

fn generator(name: &str) -> PairGenerator {
    let s = presets::load(name).unwrap();
    PairGenerator::new(&s.fiber, &s.pump).unwrap()
}

#[test]
fn microstructured_zdw_at_716nm() {
    let s = presets::load("microstructured-silica").unwrap();
    let (lo, hi) = s.zdw_bracket.unwrap();
    let z = find_zdw(&*s.fiber.dispersion, lo, hi).unwrap();
    assert!(
        (z.wavelength_nm() - 716.0).abs() < 0.5,
        "{}",
        z.wavelength_nm()
    );
}

#[test]
fn microstructured_is_phasematched_at_center() {
    let g = generator("microstructured-silica");
    let p = required_pump_power(&g.ctx).unwrap();
    assert!((p / g.ctx.p1_peak - 1.0).abs() < 1e-6);
}

#[test]
fn doubling_length() {
    let s = presets::load("pm-silica").unwrap();
    let long = s.with_value("fiber.length", "0.2").unwrap();
    let a = PairGenerator::new(&s.fiber, &s.pump).unwrap();
    let b = PairGenerator::new(&long.fiber, &long.pump).unwrap();
    let opts = GridOptions::default();
    let bw_a = a.bandwidth(&opts).unwrap();
    let bw_b = b.bandwidth(&opts).unwrap();

    let fixed = b.pairs_per_pulse(bw_a).unwrap() / a.pairs_per_pulse(bw_a).unwrap();
    assert!((fixed - 4.0).abs() < 1e-12);
    let full = b.pairs_per_pulse(bw_b).unwrap() / a.pairs_per_pulse(bw_a).unwrap();
    assert!((full / 2.0 - 1.0).abs() < 0.1, "{full}");
}

#[test]
fn loss_shortens_effective_length() {
    let s = presets::load("chalc-microwire").unwrap();
    let lossy = s.with_value("fiber.alpha", "2.3").unwrap();
    let a = PairGenerator::new(&s.fiber, &s.pump).unwrap();
    let b = PairGenerator::new(&lossy.fiber, &lossy.pump).unwrap();
    assert!(b.length() < a.length());
    assert!(b.peak_density().unwrap() < a.peak_density().unwrap());
}

#[test]
fn photons_per_pulse_scales_pairs() {
    let s = presets::load("chalc-microwire").unwrap();
    let three = s.with_value("pump.photons_per_pulse_p2", "3").unwrap();
    let a = PairGenerator::new(&s.fiber, &s.pump).unwrap();
    let b = PairGenerator::new(&three.fiber, &three.pump).unwrap();
    let bw = a.bandwidth(&GridOptions::default()).unwrap();
    let ratio = b.pairs_per_pulse(bw).unwrap() / a.pairs_per_pulse(bw).unwrap();
    assert!((ratio - 3.0).abs() < 1e-12);
    // η counts pairs per input photon, so it is unchanged.
    let ea = a.efficiency(&GridOptions::default()).unwrap().eta;
    let eb = b.efficiency(&GridOptions::default()).unwrap().eta;
    assert!((ea / eb - 1.0).abs() < 1e-12);
}

#[test]
fn no_pump_no_pairs() {
    let s = presets::load("pm-silica")
        .unwrap()
        .with_value("pump.p1_avg", "0")
        .unwrap();
    let g = PairGenerator::new(&s.fiber, &s.pump).unwrap();
    let spec = g
        .spectrum(&g.display_grid(&GridOptions::default()).unwrap())
        .unwrap();
    assert!(spec.rows.iter().all(|r| r.density == 0.0));
    assert_eq!(g.efficiency(&GridOptions::default()).unwrap().eta, 0.0);
}

#[test]
fn narrow_filter_is_reported() {
    let s = presets::load("microstructured-silica")
        .unwrap()
        .with_value("grid.filter", "712,720")
        .unwrap();
    let r = PairGenerator::new(&s.fiber, &s.pump)
        .unwrap()
        .efficiency(&s.grid)
        .unwrap();
    assert!(r
        .warnings
        .iter()
        .any(|w| matches!(w, Warning::FilterClipping { kept_fraction } if *kept_fraction < 0.5)));
}

#[test]
fn walkoff_warning_only_when_both_pulsed() {
    let s = presets::load("pm-silica").unwrap();
    let has = |regime: &str| {
        let t = s.with_value("pump.regime", regime).unwrap();
        PairGenerator::new(&t.fiber, &t.pump)
            .unwrap()
            .efficiency(&t.grid)
            .unwrap()
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::WalkOff { .. }))
    };
    assert!(has("pulsed_pulsed"));
    assert!(!has("pulsed_cw"));
}

#[test]
fn cw_cw_uses_given_weak_power() {
    let s = presets::load("chalc-microwire")
        .unwrap()
        .with_value("pump.regime", "cw_cw")
        .unwrap();
    let doubled = s
        .with_value(
            "pump.p2_avg",
            format!("{:e}", 2.0 * s.pump.p2_power().unwrap()),
        )
        .unwrap();
    assert_eq!(doubled.pump.regime, PumpingRegime::CwCw);
    let a = PairGenerator::new(&s.fiber, &s.pump).unwrap();
    let b = PairGenerator::new(&doubled.fiber, &doubled.pump).unwrap();
    let ra = a.pairs_per_second(1e13).unwrap();
    let rb = b.pairs_per_second(1e13).unwrap();
    assert!((rb / ra - 2.0).abs() < 1e-12);
    assert!(a.efficiency(&s.grid).unwrap().pairs_per_pulse.is_none());
}
