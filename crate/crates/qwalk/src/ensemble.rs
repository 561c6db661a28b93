//! Deterministic, seed-reproducible Monte Carlo over trajectories and the
//! quasimomentum ensemble.
//!
//! Every trajectory owns a counter-derived random stream, so results are a
//! pure function of (configs, master seed) and independent of the worker
//! count. The reduction over trajectories runs in a fixed order to keep
//! outputs bit-exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoherence::{sample_se_events, SEConfig, SEEvent};
use crate::error::{Error, Result};
use crate::operators::{apply_coin, KickOperator, WalkConfig};
use crate::spinor::{wrap_beta, MomentumDistribution, Spin, SpinorState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaDist {
    /// Standard deviation `delta_beta`.
    Gaussian,
    /// Total width `delta_beta`, centered on 0.
    Uniform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_traj: usize,
    /// Quasimomentum spread in lattice-recoil units.
    pub delta_beta: f64,
    pub beta_dist: BetaDist,
    pub master_seed: u64,
    pub record_per_step: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            n_traj: 1000,
            delta_beta: 0.025,
            beta_dist: BetaDist::Gaussian,
            master_seed: 0,
            record_per_step: true,
        }
    }
}

/// One stochastic realization.
#[derive(Debug, Clone)]
pub struct TrajectoryResult {
    /// Distributions for steps 0..=steps (step 0 is the initial state) when
    /// recording is on; otherwise just the final one.
    pub distributions: Vec<MomentumDistribution>,
    pub se_events: Vec<(usize, SEEvent)>,
    pub final_beta: f64,
}

/// Trajectory-averaged observables, indexed by step 0..=steps.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleStatistics {
    pub steps: usize,
    pub n_traj: usize,
    /// Averaged P(n) per recorded step.
    #[serde(skip)]
    pub distributions: Vec<MomentumDistribution>,
    /// Mean momentum per step, lattice-recoil units.
    pub mean_momentum: Vec<f64>,
    pub sem_momentum: Vec<f64>,
    /// Mean kinetic energy per step, two-photon recoil units.
    pub mean_energy: Vec<f64>,
    pub sem_energy: Vec<f64>,
    /// Total SE events across the ensemble.
    pub se_event_count: usize,
}

/// splitmix64; used to derive independent per-trajectory stream seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Independent stream for trajectory `index` under `master_seed`; `salt`
/// separates logically distinct ensembles sharing one master seed.
pub fn trajectory_rng(master_seed: u64, index: usize, salt: u64) -> ChaCha8Rng {
    let s = splitmix64(master_seed ^ splitmix64(index as u64 ^ splitmix64(salt)));
    ChaCha8Rng::seed_from_u64(s)
}

fn draw_beta<R: Rng + ?Sized>(ens: &EnsembleConfig, rng: &mut R) -> f64 {
    let b = match ens.beta_dist {
        BetaDist::Gaussian => {
            // Box-Muller keeps the dependency surface small and the stream
            // layout explicit.
            let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.gen();
            ens.delta_beta
                * (-2.0 * u1.ln()).sqrt()
                * (2.0 * std::f64::consts::PI * u2).cos()
        }
        BetaDist::Uniform => (rng.gen::<f64>() - 0.5) * ens.delta_beta,
    };
    wrap_beta(b)
}

/// Run one trajectory; `classical` replaces post-coin coherence with a
/// Born-rule projective spin measurement.
pub fn run_trajectory<R: Rng + ?Sized>(
    walk: &WalkConfig,
    se: &SEConfig,
    kick: &KickOperator,
    beta0: f64,
    classical: bool,
    record_per_step: bool,
    rng: &mut R,
) -> Result<TrajectoryResult> {
    let mut state = SpinorState::new_ratchet(walk.grid_half_width, walk.ratchet_phi, beta0)?;
    let mut distributions = Vec::new();
    if record_per_step {
        distributions.push(state.momentum_distribution(0));
    }
    let mut se_log = Vec::new();
    for i in 1..=walk.steps {
        let events = sample_se_events(se.rho, se, rng);
        for ev in &events {
            se_log.push((i, *ev));
        }
        let chi = walk.chi_for_step(i);
        if events.is_empty() {
            apply_coin(&mut state, walk.coin_alpha, chi);
        } else {
            crate::decoherence::apply_interrupted_coin(
                &mut state,
                &events,
                walk.coin_alpha,
                chi,
                se,
                rng,
            );
        }
        if classical {
            measure_spin(&mut state, rng);
        }
        crate::operators::apply_free_evolution(&mut state, walk.tau);
        kick.apply(
            &mut state,
            walk.k,
            walk.phi_global,
            walk.compensated,
            walk.eps_trunc,
        )?;
        if record_per_step || i == walk.steps {
            distributions.push(state.momentum_distribution(i));
        }
    }
    if walk.steps == 0 && !record_per_step {
        distributions.push(state.momentum_distribution(0));
    }
    Ok(TrajectoryResult {
        distributions,
        se_events: se_log,
        final_beta: state.beta,
    })
}

/// Born-rule projective measurement in the {|1⟩, |2⟩} basis.
fn measure_spin<R: Rng + ?Sized>(state: &mut SpinorState, rng: &mut R) {
    let pop2 = state.population(Spin::Two);
    let keep = if rng.gen::<f64>() < pop2 {
        Spin::Two
    } else {
        Spin::One
    };
    let drop = match keep {
        Spin::Two => Spin::One,
        Spin::One => Spin::Two,
    };
    for a in state.spin_slice_mut(drop) {
        *a = num_complex::Complex64::new(0.0, 0.0);
    }
    state.renormalize();
}

fn accumulate(results: Vec<Result<TrajectoryResult>>, walk: &WalkConfig) -> Result<EnsembleStatistics> {
    let n_steps_rec = walk.steps + 1;
    let nc = 2 * walk.grid_half_width + 1;
    let mut dist_sum = vec![vec![0.0_f64; nc]; n_steps_rec];
    let mut mom_sum = vec![0.0_f64; n_steps_rec];
    let mut mom_sq = vec![0.0_f64; n_steps_rec];
    let mut en_sum = vec![0.0_f64; n_steps_rec];
    let mut en_sq = vec![0.0_f64; n_steps_rec];
    let mut se_count = 0usize;
    let mut n_traj = 0usize;
    let mut recorded_all = true;
    for (index, r) in results.into_iter().enumerate() {
        let tr = r.map_err(|e| Error::Trajectory {
            index,
            source: Box::new(e),
        })?;
        se_count += tr.se_events.len();
        n_traj += 1;
        recorded_all &= tr.distributions.len() == n_steps_rec;
        for d in &tr.distributions {
            let s = d.step_index;
            let mut m = 0.0;
            let mut e = 0.0;
            for (i, &p) in d.probabilities.iter().enumerate() {
                let n = i as f64 - walk.grid_half_width as f64;
                dist_sum[s][i] += p;
                m += n * p;
                e += n * n * p / 2.0;
            }
            mom_sum[s] += m;
            mom_sq[s] += m * m;
            en_sum[s] += e;
            en_sq[s] += e * e;
        }
    }
    let nf = n_traj as f64;
    let sem = |sum: f64, sq: f64| {
        if n_traj < 2 {
            0.0
        } else {
            let var = (sq / nf - (sum / nf).powi(2)).max(0.0);
            (var / (nf - 1.0)).sqrt()
        }
    };
    let recorded_steps: Vec<usize> = if recorded_all {
        (0..n_steps_rec).collect()
    } else {
        vec![walk.steps]
    };
    let mut distributions = Vec::new();
    for &s in &recorded_steps {
        let mut probabilities: Vec<f64> = dist_sum[s].iter().map(|p| p / nf).collect();
        let total: f64 = probabilities.iter().sum();
        if total > 0.0 {
            for p in &mut probabilities {
                *p /= total;
            }
        }
        distributions.push(MomentumDistribution {
            probabilities,
            half_width: walk.grid_half_width,
            step_index: s,
        });
    }
    Ok(EnsembleStatistics {
        steps: walk.steps,
        n_traj,
        distributions,
        mean_momentum: recorded_steps.iter().map(|&s| mom_sum[s] / nf).collect(),
        sem_momentum: recorded_steps
            .iter()
            .map(|&s| sem(mom_sum[s], mom_sq[s]))
            .collect(),
        mean_energy: recorded_steps.iter().map(|&s| en_sum[s] / nf).collect(),
        sem_energy: recorded_steps
            .iter()
            .map(|&s| sem(en_sum[s], en_sq[s]))
            .collect(),
        se_event_count: se_count,
    })
}

fn run_impl(
    walk: &WalkConfig,
    se: &SEConfig,
    ens: &EnsembleConfig,
    classical: bool,
    salt: u64,
) -> Result<EnsembleStatistics> {
    let kick = KickOperator::new(walk.angle_grid_size, walk.grid_half_width);
    let results: Vec<Result<TrajectoryResult>> = (0..ens.n_traj)
        .into_par_iter()
        .map(|t| {
            let mut rng = trajectory_rng(ens.master_seed, t, salt);
            let beta0 = draw_beta(ens, &mut rng);
            run_trajectory(
                walk,
                se,
                &kick,
                beta0,
                classical,
                ens.record_per_step,
                &mut rng,
            )
        })
        .collect();
    accumulate(results, walk)
}

/// Monte Carlo average of the quantum walk over `n_traj` trajectories.
pub fn run_ensemble(
    walk: &WalkConfig,
    se: &SEConfig,
    ens: &EnsembleConfig,
) -> Result<EnsembleStatistics> {
    run_impl(walk, se, ens, false, 0)
}

/// Fully decohered reference: the same walk with a projective spin
/// measurement after every coin. Spreads diffusively.
pub fn run_classical_baseline(walk: &WalkConfig, ens: &EnsembleConfig) -> Result<EnsembleStatistics> {
    let se = SEConfig {
        rho: 0.0,
        ..SEConfig::default()
    };
    run_impl(walk, &se, ens, true, 0x636c61737369636c)
}
