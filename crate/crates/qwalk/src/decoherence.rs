//! Spontaneous-emission channel: rate calibration, event-time sampling,
//! the interrupted coin, spin projection onto |2⟩, and quasimomentum recoil.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::apply_spin_matrix;
use crate::spinor::{wrap_beta, Spin, SpinorState};

/// Natural linewidth γ of the driving transition, s⁻¹ (²π × 6.0666 MHz).
pub const GAMMA_D2: f64 = 2.0 * std::f64::consts::PI * 6.0666e6;

/// How an SE event acts on the spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SEMode {
    /// Always project onto |2⟩ at each event.
    PaperUnconditional,
    /// Project with probability equal to the instantaneous |2⟩ population;
    /// the physical channel only scatters from |F=2⟩.
    PopulationWeighted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SEConfig {
    /// Event probability per coin pulse.
    pub rho: f64,
    /// Coin pulse duration T, μs.
    pub t_coin: f64,
    /// SE-light onset after the coin start, μs.
    pub t_on: f64,
    /// SE pulse duration, μs.
    pub t_se: f64,
    pub max_draws: usize,
    pub mode: SEMode,
    /// Emission recoil half-width on the quasimomentum, lattice-recoil units.
    pub recoil_half_width: f64,
}

impl Default for SEConfig {
    fn default() -> Self {
        SEConfig {
            rho: 0.0,
            t_coin: 103.4,
            t_on: 30.0,
            t_se: 30.0,
            max_draws: 3,
            mode: SEMode::PaperUnconditional,
            recoil_half_width: 0.5,
        }
    }
}

/// A single emission event inside one coin pulse.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SEEvent {
    /// Event time as a fraction of the coin duration T.
    pub t_prime: f64,
    /// Quasimomentum shift δβ carried by the emitted photon.
    pub recoil: f64,
}

/// Effective scattering rate γ_eff = (γ/2) · (I/I_s) / (1 + I/I_s).
pub fn effective_se_rate(i_over_is: f64, gamma: f64) -> Result<f64> {
    if i_over_is < 0.0 {
        return Err(Error::Domain(format!(
            "intensity ratio must be non-negative, got {i_over_is}"
        )));
    }
    Ok(gamma / 2.0 * i_over_is / (1.0 + i_over_is))
}

/// Per-pulse event probability ρ = γ_eff · t_SE. `t_se` in seconds.
pub fn event_probability(gamma_eff: f64, t_se: f64) -> Result<f64> {
    let rho = gamma_eff * t_se;
    if rho > 1.0 {
        return Err(Error::ModelValidity(rho));
    }
    Ok(rho)
}

/// Map a lab SE power (μW) to ρ through the saturation curve; `cal` is the
/// power that corresponds to I/I_s = 1 and `t_se_us` is in μs.
pub fn power_to_rho(power_uw: f64, cal_uw: f64, gamma: f64, t_se_us: f64) -> Result<f64> {
    if power_uw < 0.0 {
        return Err(Error::Domain(format!(
            "SE power must be non-negative, got {power_uw}"
        )));
    }
    if cal_uw <= 0.0 {
        return Err(Error::Domain(format!(
            "calibration scale must be positive, got {cal_uw}"
        )));
    }
    let rate = effective_se_rate(power_uw / cal_uw, gamma)?;
    event_probability(rate, t_se_us * 1e-6)
}

/// Solve for the calibration scale that pins ρ(at_power) = target_rho.
pub fn calibrate_power_scale(
    target_rho: f64,
    at_power_uw: f64,
    gamma: f64,
    t_se_us: f64,
) -> Result<f64> {
    let rho_max = gamma * t_se_us * 1e-6 / 2.0;
    if !(0.0..1.0).contains(&(target_rho / rho_max)) || target_rho <= 0.0 {
        return Err(Error::Domain(format!(
            "target rho {target_rho} outside (0, {rho_max})"
        )));
    }
    let y = target_rho / rho_max;
    let x = y / (1.0 - y); // I/I_s at the calibration point
    Ok(at_power_uw / x)
}

/// Default calibration scale: ρ(3 μW) = 0.35 at the default pulse length.
pub fn default_power_scale() -> f64 {
    calibrate_power_scale(0.35, 3.0, GAMMA_D2, 30.0).expect("default calibration is in range")
}

/// Draw the SE events of one coin pulse.
///
/// Event count is Poisson with mean ρ truncated to `max_draws`; times are
/// uniform in the light window [t_on, t_on + t_se]; each event carries a
/// uniform recoil. Events are returned sorted by time.
pub fn sample_se_events<R: Rng + ?Sized>(rho: f64, cfg: &SEConfig, rng: &mut R) -> Vec<SEEvent> {
    if rho <= 0.0 {
        return Vec::new();
    }
    let poisson = Poisson::new(rho).expect("positive rate");
    let count = (poisson.sample(rng) as usize).min(cfg.max_draws);
    let mut events: Vec<SEEvent> = (0..count)
        .map(|_| {
            let t_us = cfg.t_on + rng.gen::<f64>() * cfg.t_se;
            let recoil = (rng.gen::<f64>() * 2.0 - 1.0) * cfg.recoil_half_width;
            SEEvent {
                t_prime: t_us / cfg.t_coin,
                recoil,
            }
        })
        .collect();
    events.sort_by(|a, b| a.t_prime.total_cmp(&b.t_prime));
    events
}

/// Partial coin rotation over a fraction `frac` of the pulse:
/// e^{i (α·frac/2) σ_x}, reducing to e^{i π t/(4T) σ_x} for α = π/2.
pub fn partial_coin(state: &mut SpinorState, alpha: f64, frac: f64) {
    let theta = alpha * frac / 2.0;
    let c = Complex64::new(theta.cos(), 0.0);
    let is = Complex64::new(0.0, theta.sin());
    apply_spin_matrix(state, [[c, is], [is, c]]);
}

/// Coin pulse interrupted by SE events.
///
/// Walks the event list in time order: partial σ_x rotation up to each
/// event, projection onto |2⟩ (always, or population-weighted), recoil on β,
/// then the remaining rotation to the end of the pulse. With no events this
/// is the ordinary coin.
pub fn apply_interrupted_coin<R: Rng + ?Sized>(
    state: &mut SpinorState,
    events: &[SEEvent],
    alpha: f64,
    chi: f64,
    cfg: &SEConfig,
    rng: &mut R,
) {
    if events.is_empty() {
        crate::operators::apply_coin(state, alpha, chi);
        return;
    }
    let mut t_prev = 0.0;
    for ev in events {
        partial_coin(state, alpha, ev.t_prime - t_prev);
        t_prev = ev.t_prime;
        let pop2 = state.population(Spin::Two);
        let accept = match cfg.mode {
            SEMode::PaperUnconditional => {
                if pop2 < 1e-12 {
                    log::warn!(
                        "degenerate SE projection at t' = {:.3} T: no |2> population; event skipped",
                        ev.t_prime
                    );
                    false
                } else {
                    true
                }
            }
            SEMode::PopulationWeighted => rng.gen::<f64>() < pop2,
        };
        if accept {
            for a in state.spin_slice_mut(Spin::One) {
                *a = Complex64::new(0.0, 0.0);
            }
            state.renormalize();
            state.beta = wrap_beta(state.beta + ev.recoil);
        }
    }
    partial_coin(state, alpha, 1.0 - t_prev);
}
