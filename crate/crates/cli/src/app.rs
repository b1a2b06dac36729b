use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use fwm_core::FwmError;

use crate::commands::{self, OracleOptions, Output, SweepParam};
use crate::presets;
use crate::scenario::{self, parse_pair, Scenario, KEYS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fwm",
    version,
    about = "Single-photon four-wave mixing in fibers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pair spectral density per bin (CSV)
    Spectrum(RunArgs),
    /// Mismatch at the center, phasematching power, roots, walk-off, ZDW
    Phasematch(RunArgs),
    /// Conversion efficiency and pair rates
    Efficiency(RunArgs),
    /// Efficiency over a range of one scenario parameter (CSV)
    Sweep(SweepArgs),
    /// Exact Fock-space evolution against the first-order result
    Oracle(OracleArgs),
    /// List or print built-in scenarios
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    /// Print the scenario text with the unit of every key
    Show {
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// pulsed_pulsed | pulsed_cw | equivalent_single_photon | cw_cw
    #[arg(long)]
    pub regime: Option<String>,
    /// Pass band in nm, LO,HI
    #[arg(long)]
    pub filter: Option<String>,
    /// rad/s
    #[arg(long)]
    pub bin_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// p1_avg, length, gamma, alpha, delta_n, pulse_duration, f_rep, photons_per_pulse_p2
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 32)]
    pub modes: usize,
    /// Total first-order conversion probability
    #[arg(long, default_value_t = 1e-4)]
    pub eta: f64,
    /// Half-width of the mode set in sinc lobes
    #[arg(long, default_value_t = 4.0)]
    pub lobes: f64,
    /// m
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    /// m; defaults to a quarter of the admissible step
    #[arg(long)]
    pub step: Option<f64>,
    /// Comma-separated η values: tabulate exact probability for phasematched modes
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn scenario_from(args: &RunArgs) -> anyhow::Result<Scenario> {
    let base = match (&args.preset, &args.scenario) {
        (Some(name), None) => presets::load(name)?,
        (None, Some(path)) => scenario::load_scenario(path)?,
        (None, None) => bail!(FwmError::Config(
            "give --preset NAME or --scenario PATH".into()
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    let mut file = base.file().clone();
    if let Some(r) = &args.regime {
        file.set("pump.regime", r.clone())?;
    }
    if let Some(f) = &args.filter {
        parse_pair(f).map_err(|m| FwmError::Config(format!("--filter: {m}")))?;
        file.set("grid.filter", f.clone())?;
    }
    if let Some(bw) = args.bin_width {
        file.set("grid.bin_width", format!("{bw:e}"))?;
    }
    Ok(file.resolve()?)
}

fn write_sidecar(out: &Path, argv: &[String], summary: &str) -> anyhow::Result<()> {
    let mut log = out.as_os_str().to_owned();
    log.push(".log");
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let text = format!(
        "timestamp_unix = {stamp}\ncommand = {}\n{summary}\n",
        argv.join(" ")
    );
    fs::write(&log, text).with_context(|| format!("writing {}", PathBuf::from(&log).display()))
}

fn emit(
    output: Output,
    out: Option<&Path>,
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, &output.body).with_context(|| format!("writing {}", path.display()))?;
            write_sidecar(path, argv, &output.summary)?;
            writeln!(stdout, "{}", output.summary)?;
        }
        None => {
            stdout.write_all(&output.body)?;
            writeln!(stderr, "{}", output.summary)?;
        }
    }
    Ok(())
}

fn preset_show(name: &str) -> anyhow::Result<String> {
    let p = presets::find(name)?;
    let mut text = format!("# {}: {}\n", p.name, p.summary);
    for line in p.text.lines() {
        let key = line.split('=').next().unwrap_or("").trim();
        match scenario::unit_of(key) {
            Some(unit) if !line.contains('#') => text.push_str(&format!("{line:<35} # {unit}\n")),
            Some(unit) => text.push_str(&format!("{line}  [{unit}]\n")),
            None => text.push_str(&format!("{line}\n")),
        }
    }
    Ok(text)
}

fn preset_list() -> String {
    let mut text = String::new();
    for p in presets::PRESETS {
        text.push_str(&format!("{:<24}{}\n", p.name, p.summary));
    }
    text.push_str("\nscenario keys:\n");
    for (k, u) in KEYS {
        text.push_str(&format!("  {k:<28}{u}\n"));
    }
    text
}

pub fn execute(
    cli: Cli,
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> anyhow::Result<()> {
    match cli.command {
        Command::Spectrum(a) => {
            let s = scenario_from(&a)?;
            emit(
                commands::spectrum(&s)?,
                a.out.as_deref(),
                argv,
                stdout,
                stderr,
            )
        }
        Command::Phasematch(a) => {
            let s = scenario_from(&a)?;
            emit(
                commands::phasematch(&s)?,
                a.out.as_deref(),
                argv,
                stdout,
                stderr,
            )
        }
        Command::Efficiency(a) => {
            let s = scenario_from(&a)?;
            emit(
                commands::efficiency(&s)?,
                a.out.as_deref(),
                argv,
                stdout,
                stderr,
            )
        }
        Command::Sweep(a) => {
            let s = scenario_from(&a.run)?;
            let param = SweepParam::parse(&a.param)?;
            let o = commands::sweep(&s, param, a.from, a.to, a.steps)?;
            emit(o, a.run.out.as_deref(), argv, stdout, stderr)
        }
        Command::Oracle(a) => {
            let o = match &a.curve {
                Some(list) => {
                    let etas = list
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<f64>()
                                .map_err(|_| FwmError::Config(format!("--curve: bad number `{t}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    commands::oracle_curve(&etas, a.modes, a.length)?
                }
                None => commands::oracle_compare(&OracleOptions {
                    modes: a.modes,
                    eta: a.eta,
                    lobes: a.lobes,
                    length: a.length,
                    step: a.step,
                })?,
            };
            match &a.out {
                Some(_) => emit(o, a.out.as_deref(), argv, stdout, stderr),
                // the comparison report is the interesting part; CSV only on request
                None => {
                    writeln!(stdout, "{}", o.summary)?;
                    Ok(())
                }
            }
        }
        Command::Preset { action } => {
            let text = match action {
                PresetAction::List => preset_list(),
                PresetAction::Show { name } => preset_show(&name)?,
            };
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// 3 for numerical failures, 2 for everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<FwmError>() {
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = if code == EXIT_OK {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match execute(cli, argv, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            exit_code(&e)
        }
    }
}
