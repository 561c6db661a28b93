//! Command-line orchestration: single runs, parameter sweeps, the
//! quantum-vs-classical comparison, and SE power calibration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{load_config, ConfigFile, RunManifest, SweepAxis};
use crate::decoherence::{default_power_scale, power_to_rho, GAMMA_D2};
use crate::ensemble::{run_classical_baseline, run_ensemble};
use crate::error::ConfigError;
use crate::observables::{fit_rate_from_stats, transition_metrics};
use crate::output;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Momentum-space quantum walk simulator with a tunable spontaneous-emission channel"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; omit for defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (env: QWALK_OUT), created if missing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (env: QWALK_THREADS); affects wall time only.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one ensemble and write per-step distributions and a summary.
    Simulate,
    /// Scan one axis; one summary row per value.
    Sweep {
        #[arg(long, value_enum)]
        axis: Option<AxisArg>,
        /// Comma-separated values, e.g. 0,0.2,0.35.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Run the quantum walk and the classical baseline side by side.
    Compare,
    /// Emit the SE power-to-probability calibration table.
    Calibrate,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Rho,
    Power,
    K,
    Steps,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Rho => SweepAxis::Rho,
            AxisArg::Power => SweepAxis::Power,
            AxisArg::K => SweepAxis::K,
            AxisArg::Steps => SweepAxis::Steps,
        }
    }
}

pub fn run() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(AppError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

pub enum AppError {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e)
    }
}

impl From<crate::error::Error> for AppError {
    fn from(e: crate::error::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn execute(cli: Cli) -> Result<(), AppError> {
    if let Some(n) = resolve_threads(cli.threads) {
        // Ignore the error if a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut manifest = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default().resolve()?,
    };
    if let Some(seed) = cli.seed {
        manifest.master_seed = seed;
        manifest.ensemble.master_seed = seed;
    }
    let out_dir = resolve_out_dir(cli.out.as_deref());
    std::fs::create_dir_all(&out_dir)?;

    match cli.command {
        Command::Simulate => cmd_simulate(&manifest, &out_dir),
        Command::Sweep { axis, values } => {
            let (axis, values) = match (axis, values, manifest.sweep.clone()) {
                (Some(a), Some(v), _) => (a.into(), v),
                (None, None, Some(s)) => (s.axis, s.values),
                _ => {
                    return Err(AppError::Config(ConfigError::range(
                        "sweep",
                        "give --axis and --values, or a sweep block in the config".to_string(),
                    )))
                }
            };
            if values.is_empty() {
                return Err(AppError::Config(ConfigError::range(
                    "sweep.values",
                    "must be non-empty".to_string(),
                )));
            }
            cmd_sweep(&manifest, axis, &values, &out_dir)
        }
        Command::Compare => cmd_compare(&manifest, &out_dir),
        Command::Calibrate => cmd_calibrate(&manifest, &out_dir),
    }
}

fn resolve_threads(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("QWALK_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var("QWALK_OUT").ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qwalk-out"))
}

/// Single ensemble run: distributions.csv + summary.json + manifest.json.
pub fn cmd_simulate(manifest: &RunManifest, out_dir: &Path) -> Result<(), AppError> {
    log::info!(
        "simulate: k={}, steps={}, rho={}, {} trajectories",
        manifest.walk.k,
        manifest.walk.steps,
        manifest.se.rho,
        manifest.ensemble.n_traj
    );
    let stats = run_ensemble(&manifest.walk, &manifest.se, &manifest.ensemble)?;
    output::write_distributions_csv(&stats, &out_dir.join("distributions.csv"))?;
    output::write_json(&output::summarize(&stats, None), &out_dir.join("summary.json"))?;
    output::write_manifest(manifest, out_dir)?;
    Ok(())
}

/// One summary row per swept value; a rate fit when sweeping step counts.
pub fn cmd_sweep(
    manifest: &RunManifest,
    axis: SweepAxis,
    values: &[f64],
    out_dir: &Path,
) -> Result<(), AppError> {
    let axis_name = match axis {
        SweepAxis::Rho => "rho",
        SweepAxis::Power => "power",
        SweepAxis::K => "k",
        SweepAxis::Steps => "steps",
    };
    let mut rows = Vec::new();
    for &v in values {
        let mut walk = manifest.walk.clone();
        let mut se = manifest.se.clone();
        match axis {
            SweepAxis::Rho => {
                if !(0.0..=1.0).contains(&v) {
                    return Err(AppError::Config(ConfigError::range(
                        "sweep.values",
                        format!("rho {v} outside [0, 1]"),
                    )));
                }
                se.rho = v;
            }
            SweepAxis::Power => {
                se.rho = power_to_rho(v, default_power_scale(), GAMMA_D2, se.t_se)?;
            }
            SweepAxis::K => {
                walk.k = v;
                // The kick-induced phase tracks the kick strength.
                walk.phi_global = 2.0 * v + std::f64::consts::PI;
            }
            SweepAxis::Steps => {
                if v < 0.0 || v.fract() != 0.0 {
                    return Err(AppError::Config(ConfigError::range(
                        "sweep.values",
                        format!("step count {v} must be a non-negative integer"),
                    )));
                }
                walk.steps = v as usize;
            }
        }
        log::info!("sweep {axis_name}={v}: rho={}", se.rho);
        let stats = run_ensemble(&walk, &se, &manifest.ensemble)?;
        rows.push(output::SweepRow {
            axis: axis_name,
            value: v,
            rho: se.rho,
            mean_momentum: *stats.mean_momentum.last().unwrap(),
            sem_momentum: *stats.sem_momentum.last().unwrap(),
            mean_energy: *stats.mean_energy.last().unwrap(),
            sem_energy: *stats.sem_energy.last().unwrap(),
        });
    }
    output::write_sweep_csv(&rows, &out_dir.join("sweep.csv"))?;
    let rate = if axis == SweepAxis::Steps && rows.len() >= 3 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.value, r.mean_energy)).collect();
        Some(crate::observables::fit_energy_rate(&pts)?)
    } else {
        None
    };
    #[derive(serde::Serialize)]
    struct SweepSummary<'a> {
        axis: &'a str,
        values: &'a [f64],
        #[serde(skip_serializing_if = "Option::is_none")]
        rate: Option<crate::observables::RateFit>,
    }
    output::write_json(
        &SweepSummary {
            axis: axis_name,
            values,
            rate,
        },
        &out_dir.join("sweep_summary.json"),
    )?;
    output::write_manifest(manifest, out_dir)?;
    Ok(())
}

/// Quantum walk vs classical baseline with transition metrics.
pub fn cmd_compare(manifest: &RunManifest, out_dir: &Path) -> Result<(), AppError> {
    log::info!(
        "compare: k={}, steps={}, rho={}",
        manifest.walk.k,
        manifest.walk.steps,
        manifest.se.rho
    );
    let qw = run_ensemble(&manifest.walk, &manifest.se, &manifest.ensemble)?;
    let cw = run_classical_baseline(&manifest.walk, &manifest.ensemble)?;
    let report = transition_metrics(&qw, &cw)?;
    output::write_compare_csv(&qw, &cw, &report, &out_dir.join("compare.csv"))?;
    #[derive(serde::Serialize)]
    struct CompareReport<'a> {
        report: &'a crate::observables::TransitionReport,
        quantum_rate: Option<crate::observables::RateFit>,
        classical_rate: Option<crate::observables::RateFit>,
    }
    let steps = manifest.walk.steps;
    let (qr, cr) = if steps >= 3 {
        (
            fit_rate_from_stats(&qw, 1, steps).ok(),
            fit_rate_from_stats(&cw, 1, steps).ok(),
        )
    } else {
        (None, None)
    };
    output::write_json(
        &CompareReport {
            report: &report,
            quantum_rate: qr,
            classical_rate: cr,
        },
        &out_dir.join("report.json"),
    )?;
    output::write_manifest(manifest, out_dir)?;
    Ok(())
}

/// SE calibration table: power (μW) → ρ with the shipped scale that pins
/// ρ(3 μW) = 0.35.
pub fn cmd_calibrate(manifest: &RunManifest, out_dir: &Path) -> Result<(), AppError> {
    let cal = default_power_scale();
    let t_se = manifest.se.t_se;
    let mut table = Vec::new();
    let mut p = 0.0;
    while p <= 7.2 + 1e-9 {
        table.push((p, power_to_rho(p, cal, GAMMA_D2, t_se)?));
        p += 0.4;
    }
    #[derive(serde::Serialize)]
    struct Calibration {
        gamma_per_s: f64,
        t_se_us: f64,
        saturation_power_uw: f64,
        reference_power_uw: f64,
        reference_rho: f64,
        table: Vec<(f64, f64)>,
    }
    output::write_json(
        &Calibration {
            gamma_per_s: GAMMA_D2,
            t_se_us: t_se,
            saturation_power_uw: cal,
            reference_power_uw: 3.0,
            reference_rho: 0.35,
            table,
        },
        &out_dir.join("calibration.json"),
    )?;
    output::write_manifest(manifest, out_dir)?;
    Ok(())
}
