use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::hop::AlgorithmSpec;
use crate::model::Channel;
use crate::scenario::ScenarioParams;

use super::HarnessError;

/// A full experiment: scenario sampling parameters, the set of algorithms to
/// compare, how many scenarios to run per grid point, and aggregation
/// settings.
///
/// The TOML config file uses exactly these field names; unknown keys are
/// errors. `n_common_grid` sweeps the size of the common channel set, and
/// for each grid point overrides `scenario_params.n_common`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario_params: ScenarioParams,
    pub n_scenarios: usize,
    pub algorithms: Vec<AlgorithmSpec>,
    pub mttd_batch_size: usize,
    pub master_seed: u64,
    pub t_max: u32,
    pub n_common_grid: Vec<Channel>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Small configuration that finishes in minutes on a laptop: 64
    /// channels, 20 users, 100 scenarios per grid point.
    pub fn desk() -> Self {
        Self {
            scenario_params: ScenarioParams {
                n_channels: 64,
                n_users: 20,
                area_side: 1000.0,
                su_range: 350.0,
                n_pus: 10,
                pu_range: 700.0,
                n_common: 4,
                max_resample_attempts: 1000,
            },
            n_scenarios: 100,
            algorithms: vec![
                AlgorithmSpec::Sweep,
                AlgorithmSpec::SweepRandom,
                AlgorithmSpec::SweepForward,
                AlgorithmSpec::PiRandomized,
                AlgorithmSpec::PseudoRandomSweep,
                AlgorithmSpec::StickTogether { n_th: 5, k_th: 6 },
            ],
            mttd_batch_size: 10,
            master_seed: 1,
            t_max: 1024,
            n_common_grid: vec![2, 4, 8, 16, 32],
            output_dir: PathBuf::from("out"),
        }
    }

    /// Full-scale comparison setup: 256 channels, 100 users in a 1 km
    /// square with 250 m range, 50 primary users at double range, 1000
    /// scenarios per grid point aggregated in batches of 10.
    pub fn paper() -> Self {
        Self {
            scenario_params: ScenarioParams {
                n_channels: 256,
                n_users: 100,
                area_side: 1000.0,
                su_range: 250.0,
                n_pus: 50,
                pu_range: 500.0,
                n_common: 4,
                max_resample_attempts: 1000,
            },
            n_scenarios: 1000,
            algorithms: vec![
                AlgorithmSpec::Sweep,
                AlgorithmSpec::SweepRandom,
                AlgorithmSpec::SweepForward,
                AlgorithmSpec::PiRandomized,
                AlgorithmSpec::PseudoRandomSweep,
                AlgorithmSpec::StickTogether { n_th: 5, k_th: 30 },
            ],
            mttd_batch_size: 10,
            master_seed: 1,
            t_max: 4096,
            n_common_grid: vec![2, 4, 8, 16, 32],
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_scenarios == 0 {
            return Err(HarnessError::Config("n_scenarios must be positive".into()));
        }
        if self.mttd_batch_size == 0 || !self.n_scenarios.is_multiple_of(self.mttd_batch_size) {
            return Err(HarnessError::Config(format!(
                "n_scenarios ({}) must be divisible by mttd_batch_size ({})",
                self.n_scenarios, self.mttd_batch_size
            )));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config("algorithms must be non-empty".into()));
        }
        if self.n_common_grid.is_empty() {
            return Err(HarnessError::Config(
                "n_common_grid must be non-empty".into(),
            ));
        }
        if self.t_max == 0 {
            return Err(HarnessError::Config("t_max must be at least 1".into()));
        }
        for &n_common in &self.n_common_grid {
            self.scenario_params
                .with_n_common(n_common)
                .validate()
                .map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let config: Self =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}
