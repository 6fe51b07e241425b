use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{Channel, ChannelSet, Scenario, Topology, UserId};

use super::GenerationError;

/// Seeds a scenario was produced from, kept alongside the data so any file
/// can be regenerated or audited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioProvenance {
    pub master_seed: u64,
    pub scenario_index: usize,
    pub topology_seed: u64,
    pub channel_seed: u64,
}

/// On-disk form of a scenario (JSON). Field names are the schema; files
/// round-trip losslessly through [`ScenarioFile::to_scenario`] /
/// [`ScenarioFile::from_scenario`]. User ids are 0-based indices into
/// `channel_sets`; channels are 1-based labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub n_channels: Channel,
    pub n_users: usize,
    pub edges: Vec<(UserId, UserId)>,
    pub channel_sets: Vec<Vec<Channel>>,
    pub common_set: Vec<Channel>,
    pub provenance: ScenarioProvenance,
}

impl ScenarioFile {
    pub fn from_scenario(scenario: &Scenario, provenance: ScenarioProvenance) -> Self {
        Self {
            n_channels: scenario.n_channels(),
            n_users: scenario.n_users(),
            edges: scenario.topology().edges().iter().copied().collect(),
            channel_sets: scenario
                .channel_sets()
                .map(|s| s.iter().collect())
                .collect(),
            common_set: scenario.common_set().iter().collect(),
            provenance,
        }
    }

    pub fn to_scenario(&self) -> Result<Scenario, GenerationError> {
        let topology = Topology::new(self.n_users, self.edges.iter().copied())?;
        let channel_sets = self
            .channel_sets
            .iter()
            .map(|xs| ChannelSet::new(xs.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let common_set = ChannelSet::new(self.common_set.clone())?;
        Ok(Scenario::new(
            self.n_channels,
            topology,
            channel_sets,
            common_set,
        )?)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self, GenerationError> {
        serde_json::from_str(s).map_err(|e| GenerationError::File(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), GenerationError> {
        fs::write(path, self.to_json_string())
            .map_err(|e| GenerationError::File(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, GenerationError> {
        let text = fs::read_to_string(path)
            .map_err(|e| GenerationError::File(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}
