//! Plot-ready data emission: CSV for bulk series, JSON for summaries and
//! the reproduction manifest.
//!
//! CSV schema is locale-independent: header row, comma separators, '.'
//! decimal point, floats in Rust's shortest round-trip form.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunManifest;
use crate::ensemble::EnsembleStatistics;
use crate::observables::{RateFit, TransitionReport};

/// Per-step distribution table: `step,n,p`.
pub fn write_distributions_csv(stats: &EnsembleStatistics, path: &Path) -> std::io::Result<()> {
    let mut out = String::from("step,n,p\n");
    for d in &stats.distributions {
        for (n, p) in d.iter() {
            out.push_str(&format!("{},{},{}\n", d.step_index, n, p));
        }
    }
    fs::write(path, out)
}

#[derive(Serialize)]
pub struct RunSummary<'a> {
    /// Momentum in lattice-recoil units; energy in two-photon recoil units.
    pub units: &'static str,
    pub steps: Vec<usize>,
    pub mean_momentum: &'a [f64],
    pub sem_momentum: &'a [f64],
    pub mean_energy: &'a [f64],
    pub sem_energy: &'a [f64],
    pub n_traj: usize,
    pub se_event_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateFit>,
}

pub fn summarize<'a>(stats: &'a EnsembleStatistics, rate: Option<RateFit>) -> RunSummary<'a> {
    RunSummary {
        units: "momentum: hbar*G; energy: (hbar*G)^2/(2M)",
        steps: stats.distributions.iter().map(|d| d.step_index).collect(),
        mean_momentum: &stats.mean_momentum,
        sem_momentum: &stats.sem_momentum,
        mean_energy: &stats.mean_energy,
        sem_energy: &stats.sem_energy,
        n_traj: stats.n_traj,
        se_event_count: stats.se_event_count,
        rate,
    }
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")
}

pub fn write_manifest(manifest: &RunManifest, dir: &Path) -> std::io::Result<()> {
    write_json(manifest, &dir.join("manifest.json"))
}

/// One sweep row per value: resolved ρ and final-step observables.
pub struct SweepRow {
    pub axis: &'static str,
    pub value: f64,
    pub rho: f64,
    pub mean_momentum: f64,
    pub sem_momentum: f64,
    pub mean_energy: f64,
    pub sem_energy: f64,
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> std::io::Result<()> {
    let mut out =
        String::from("axis,value,rho,mean_momentum,sem_momentum,mean_energy,sem_energy\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.axis, r.value, r.rho, r.mean_momentum, r.sem_momentum, r.mean_energy, r.sem_energy
        ));
    }
    fs::write(path, out)
}

/// Side-by-side quantum vs classical series.
pub fn write_compare_csv(
    qw: &EnsembleStatistics,
    cw: &EnsembleStatistics,
    report: &TransitionReport,
    path: &Path,
) -> std::io::Result<()> {
    let mut out = String::from("step,e_quantum,e_classical,energy_gap,gap_sem,tv_distance\n");
    for (i, &s) in report.steps.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s,
            qw.mean_energy[i],
            cw.mean_energy[i],
            report.energy_gap[i],
            report.gap_sem[i],
            report.tv_distance[i]
        ));
    }
    fs::write(path, out)
}
