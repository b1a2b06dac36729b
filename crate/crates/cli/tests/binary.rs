use std::fs;
use std::process::{Command, Output};

fn fwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwm"))
        .args(args)
        .output()
        .expect("run fwm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn efficiency_report_for_chalcogenide() {
    let o = fwm(&["efficiency", "--preset", "chalc-microwire"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("regime = pulsed_pulsed"));
    let eta: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("eta = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(eta > 1.1e-3 / 2.0 && eta < 1.1e-3 * 2.0, "{eta}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["spectrum", "efficiency", "phasematch"] {
        let a = dir.path().join(format!("{cmd}-a.out"));
        let b = dir.path().join(format!("{cmd}-b.out"));
        for p in [&a, &b] {
            let o = fwm(&[cmd, "--preset", "pm-silica", "--out", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{cmd}");
        let log = fs::read_to_string(format!("{}.log", a.display())).unwrap();
        assert!(log.starts_with("timestamp_unix = "));
        assert!(!fs::read_to_string(&a).unwrap().contains("timestamp"));
    }
}

#[test]
fn sweep_rows_in_parameter_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = fwm(&[
        "sweep",
        "--param",
        "p1_avg",
        "--from",
        "0",
        "--to",
        "10",
        "--steps",
        "11",
        "--preset",
        "pm-silica",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap().get(0), Some("p1_avg"));
    let rows: Vec<(f64, f64)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
    assert_eq!(rows[0].1, 0.0);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    // γP₁ moves the phasematched point, so η/P₁ drifts slightly instead of staying fixed
    let slopes: Vec<f64> = rows[1..].iter().map(|(p, e)| e / p).collect();
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    assert!(
        slopes.iter().all(|s| (s / mean - 1.0).abs() < 0.2),
        "{slopes:?}"
    );
}

#[test]
fn oracle_comparison_report() {
    let o = fwm(&["oracle", "--modes", "32", "--eta", "1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let dev: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max_relative_deviation = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev < 1e-3);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swapped.fwm");
    fs::write(
        &path,
        "fiber.gamma = 180\nfiber.length = 0.1\ndispersion.beta2 = 0.05\n\
         pump.lambda_p1 = 1480\npump.lambda_p2 = 1620\npump.p1_avg = 1e-4\n\
         pump.pulse_duration = 2\npump.f_rep = 80\n",
    )
    .unwrap();
    let o = fwm(&["efficiency", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("longer wavelength"));

    assert_eq!(
        fwm(&["efficiency", "--preset", "none"]).status.code(),
        Some(2)
    );
    assert_eq!(fwm(&["efficiency"]).status.code(), Some(2));
    assert_eq!(fwm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        fwm(&["efficiency", "--preset", "pm-silica", "--regime", "pulsed"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numerical_failures_exit_3() {
    let o = fwm(&[
        "efficiency",
        "--preset",
        "chalc-microwire",
        "--bin-width",
        "1e13",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("too coarse"));
    let o = fwm(&["oracle", "--modes", "4", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("use at most"));
}

#[test]
fn preset_show_documents_units() {
    let o = fwm(&["preset", "show", "pm-silica"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("ps^2/m"));
    assert!(text.contains("# derived by inversion, not a published value"));
    let list = stdout(&fwm(&["preset", "list"]));
    for name in ["pm-silica", "microstructured-silica", "chalc-microwire"] {
        assert!(list.contains(name));
    }
}

#[test]
fn spectrum_csv_to_stdout() {
    let o = fwm(&["spectrum", "--preset", "chalc-microwire"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("lambda_nm,omega_rad_per_s,spectral_density,is_pump_bin\n"));
    assert!(stderr(&o).contains("chalc-microwire"));
}
