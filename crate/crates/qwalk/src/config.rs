//! JSON configuration schema, validation, and the run manifest.
//!
//! An empty document resolves to the stock 5-step walk at k = 1.45 with
//! 10³ trajectories and Δβ = 0.025. Every output directory receives a copy
//! of the resolved manifest so runs can be reproduced bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decoherence::{SEConfig, SEMode};
use crate::ensemble::{BetaDist, EnsembleConfig};
use crate::error::ConfigError;
use crate::operators::WalkConfig;

/// Sweep axis for `cmd_sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Rho,
    /// SE power in μW, mapped through the saturation calibration.
    Power,
    K,
    Steps,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Raw JSON document; all fields optional, defaults filled on resolve.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub walk: WalkSettings,
    #[serde(default)]
    pub se: SESettings,
    #[serde(default)]
    pub ensemble: EnsembleSettings,
    #[serde(default)]
    pub sweep: Option<SweepSettings>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSettings {
    pub k: Option<f64>,
    pub steps: Option<i64>,
    pub tau: Option<f64>,
    pub phi_global: Option<f64>,
    pub compensated: Option<bool>,
    pub coin_alpha: Option<f64>,
    pub coin_chi_first: Option<f64>,
    pub coin_chi_rest: Option<f64>,
    pub angle_grid_size: Option<u64>,
    pub grid_half_width: Option<u64>,
    pub ratchet_phi: Option<f64>,
    pub eps_trunc: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SESettings {
    pub rho: Option<f64>,
    /// Alternative to `rho`: SE power in μW through the calibration curve.
    pub power: Option<f64>,
    pub t_coin: Option<f64>,
    pub t_on: Option<f64>,
    pub t_se: Option<f64>,
    pub max_draws: Option<i64>,
    pub mode: Option<SEMode>,
    pub recoil_half_width: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSettings {
    pub n_traj: Option<i64>,
    pub delta_beta: Option<f64>,
    pub beta_dist: Option<BetaDist>,
    pub master_seed: Option<u64>,
    pub record_per_step: Option<bool>,
}

/// Fully resolved run description; serialized alongside every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub master_seed: u64,
    pub created_unix: u64,
    pub walk: WalkConfig,
    pub se: SEConfig,
    pub ensemble: EnsembleConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSettings>,
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl ConfigFile {
    pub fn from_slice(bytes: &[u8]) -> Result<Self, ConfigError> {
        if bytes.iter().all(|b| b.is_ascii_whitespace()) {
            return Ok(ConfigFile::default());
        }
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Fill defaults and validate ranges; errors name the offending key.
    pub fn resolve(&self) -> Result<RunManifest, ConfigError> {
        let w = &self.walk;
        let k = w.k.unwrap_or(1.45);
        if k < 0.0 {
            return Err(ConfigError::range("k", format!("must be >= 0, got {k}")));
        }
        let steps = w.steps.unwrap_or(5);
        if steps < 0 {
            return Err(ConfigError::range(
                "steps",
                format!("must be >= 0, got {steps}"),
            ));
        }
        let grid_half_width = w.grid_half_width.unwrap_or(64);
        if grid_half_width < 2 {
            return Err(ConfigError::range(
                "grid_half_width",
                format!("must be >= 2, got {grid_half_width}"),
            ));
        }
        let angle_grid_size = w.angle_grid_size.unwrap_or(256);
        if !angle_grid_size.is_power_of_two() || angle_grid_size < 2 * grid_half_width + 1 {
            return Err(ConfigError::range(
                "angle_grid_size",
                format!(
                    "must be a power of two >= 2*grid_half_width+1 = {}, got {angle_grid_size}",
                    2 * grid_half_width + 1
                ),
            ));
        }
        let eps_trunc = w.eps_trunc.unwrap_or(crate::spinor::DEFAULT_EPS_TRUNC);
        if eps_trunc <= 0.0 {
            return Err(ConfigError::range(
                "eps_trunc",
                format!("must be > 0, got {eps_trunc}"),
            ));
        }
        let mut walk = WalkConfig::new(k, steps as usize);
        walk.tau = w.tau.unwrap_or(walk.tau);
        walk.phi_global = w.phi_global.unwrap_or(walk.phi_global);
        walk.compensated = w.compensated.unwrap_or(true);
        walk.coin_alpha = w.coin_alpha.unwrap_or(walk.coin_alpha);
        walk.coin_chi_first = w.coin_chi_first.unwrap_or(walk.coin_chi_first);
        walk.coin_chi_rest = w.coin_chi_rest.unwrap_or(walk.coin_chi_rest);
        walk.angle_grid_size = angle_grid_size as usize;
        walk.grid_half_width = grid_half_width as usize;
        walk.ratchet_phi = w.ratchet_phi.unwrap_or(walk.ratchet_phi);
        walk.eps_trunc = eps_trunc;

        let s = &self.se;
        let mut se = SEConfig::default();
        se.t_coin = s.t_coin.unwrap_or(se.t_coin);
        se.t_on = s.t_on.unwrap_or(se.t_on);
        se.t_se = s.t_se.unwrap_or(se.t_se);
        if se.t_coin <= 0.0 {
            return Err(ConfigError::range(
                "t_coin",
                format!("must be > 0, got {}", se.t_coin),
            ));
        }
        if se.t_on < 0.0 || se.t_se < 0.0 || se.t_on + se.t_se > se.t_coin {
            return Err(ConfigError::range(
                "t_on",
                format!(
                    "window [t_on, t_on+t_se] = [{}, {}] must lie inside the coin pulse of {}",
                    se.t_on,
                    se.t_on + se.t_se,
                    se.t_coin
                ),
            ));
        }
        let max_draws = s.max_draws.unwrap_or(3);
        if max_draws < 1 {
            return Err(ConfigError::range(
                "max_draws",
                format!("must be >= 1, got {max_draws}"),
            ));
        }
        se.max_draws = max_draws as usize;
        se.mode = s.mode.unwrap_or(se.mode);
        se.recoil_half_width = s.recoil_half_width.unwrap_or(se.recoil_half_width);
        if se.recoil_half_width < 0.0 {
            return Err(ConfigError::range(
                "recoil_half_width",
                format!("must be >= 0, got {}", se.recoil_half_width),
            ));
        }
        se.rho = match (s.rho, s.power) {
            (Some(r), None) => r,
            (None, Some(p)) => {
                if p < 0.0 {
                    return Err(ConfigError::range(
                        "power",
                        format!("must be >= 0, got {p}"),
                    ));
                }
                crate::decoherence::power_to_rho(
                    p,
                    crate::decoherence::default_power_scale(),
                    crate::decoherence::GAMMA_D2,
                    se.t_se,
                )
                .map_err(|e| ConfigError::range("power", e.to_string()))?
            }
            (None, None) => 0.0,
            (Some(_), Some(_)) => {
                return Err(ConfigError::range(
                    "rho",
                    "give either rho or power, not both".to_string(),
                ));
            }
        };
        if !(0.0..=1.0).contains(&se.rho) {
            return Err(ConfigError::range(
                "rho",
                format!("must be in [0, 1], got {}", se.rho),
            ));
        }

        let e = &self.ensemble;
        let n_traj = e.n_traj.unwrap_or(1000);
        if n_traj < 1 {
            return Err(ConfigError::range(
                "n_traj",
                format!("must be >= 1, got {n_traj}"),
            ));
        }
        let delta_beta = e.delta_beta.unwrap_or(0.025);
        if delta_beta < 0.0 {
            return Err(ConfigError::range(
                "delta_beta",
                format!("must be >= 0, got {delta_beta}"),
            ));
        }
        let ensemble = EnsembleConfig {
            n_traj: n_traj as usize,
            delta_beta,
            beta_dist: e.beta_dist.unwrap_or(BetaDist::Gaussian),
            master_seed: e.master_seed.unwrap_or(0),
            record_per_step: e.record_per_step.unwrap_or(true),
        };

        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(ConfigError::range("sweep.values", "must be non-empty"));
            }
        }

        Ok(RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            master_seed: ensemble.master_seed,
            created_unix: now_unix(),
            walk,
            se,
            ensemble,
            sweep: self.sweep.clone(),
        })
    }
}

/// Read and resolve a config file.
pub fn load_config(path: &Path) -> Result<RunManifest, ConfigError> {
    let bytes = std::fs::read(path)?;
    ConfigFile::from_slice(&bytes)?.resolve()
}
