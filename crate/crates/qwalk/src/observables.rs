//! Scalar diagnostics of the quantum-to-classical transition: mean momentum,
//! mean kinetic energy, the linear energy-growth rate R, and comparison
//! metrics between ensembles.

use serde::Serialize;

use crate::ensemble::EnsembleStatistics;
use crate::error::{Error, Result};
use crate::spinor::MomentumDistribution;

/// Σ_n P(n)·n, lattice-recoil units.
pub fn mean_momentum(dist: &MomentumDistribution) -> f64 {
    dist.iter().map(|(n, p)| n as f64 * p).sum()
}

/// Σ_n P(n)·n²/2, two-photon recoil units. The O(Δβ²) quasimomentum
/// contribution is omitted.
pub fn mean_energy(dist: &MomentumDistribution) -> f64 {
    dist.iter().map(|(n, p)| (n * n) as f64 * p / 2.0).sum()
}

/// Ordinary least-squares fit of mean energy against step number.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_sum_of_squares: f64,
    pub step_range: (f64, f64),
}

pub fn fit_energy_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 * n * sxx.max(1.0) {
        return Err(Error::Fit("degenerate abscissae".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rss = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !slope.is_finite() {
        return Err(Error::Fit("non-finite slope".into()));
    }
    Ok(RateFit {
        slope,
        intercept,
        residual_sum_of_squares: rss,
        step_range: (lo, hi),
    })
}

/// Fit R from ensemble statistics over an inclusive step window
/// (Fig.-5 style default is 1..=steps).
pub fn fit_rate_from_stats(
    stats: &EnsembleStatistics,
    step_lo: usize,
    step_hi: usize,
) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = stats
        .distributions
        .iter()
        .zip(&stats.mean_energy)
        .filter(|(d, _)| d.step_index >= step_lo && d.step_index <= step_hi)
        .map(|(d, &e)| (d.step_index as f64, e))
        .collect();
    fit_energy_rate(&pts)
}

/// Per-step comparison between a quantum-walk ensemble and a reference
/// (typically the classical baseline).
#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    pub steps: Vec<usize>,
    /// E_qw − E_ref per step.
    pub energy_gap: Vec<f64>,
    /// Combined standard error of the gap per step.
    pub gap_sem: Vec<f64>,
    /// Total-variation distance between the averaged distributions.
    pub tv_distance: Vec<f64>,
}

pub fn transition_metrics(
    qw: &EnsembleStatistics,
    reference: &EnsembleStatistics,
) -> Result<TransitionReport> {
    if qw.steps != reference.steps || qw.distributions.len() != reference.distributions.len() {
        return Err(Error::Mismatch(format!(
            "step counts differ: {} vs {}",
            qw.steps, reference.steps
        )));
    }
    let mut steps = Vec::new();
    let mut energy_gap = Vec::new();
    let mut gap_sem = Vec::new();
    let mut tv = Vec::new();
    for (i, (dq, dr)) in qw
        .distributions
        .iter()
        .zip(&reference.distributions)
        .enumerate()
    {
        if dq.step_index != dr.step_index {
            return Err(Error::Mismatch("recorded steps differ".into()));
        }
        steps.push(dq.step_index);
        energy_gap.push(qw.mean_energy[i] - reference.mean_energy[i]);
        gap_sem.push((qw.sem_energy[i].powi(2) + reference.sem_energy[i].powi(2)).sqrt());
        tv.push(total_variation(dq, dr)?);
    }
    Ok(TransitionReport {
        steps,
        energy_gap,
        gap_sem,
        tv_distance: tv,
    })
}

/// ½ Σ_n |P(n) − Q(n)| ∈ [0, 1].
pub fn total_variation(p: &MomentumDistribution, q: &MomentumDistribution) -> Result<f64> {
    if p.probabilities.len() != q.probabilities.len() {
        return Err(Error::Mismatch("distribution grids differ".into()));
    }
    Ok(p.probabilities
        .iter()
        .zip(&q.probabilities)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0)
}
