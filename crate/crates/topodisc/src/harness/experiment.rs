use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run_discovery, EngineConfig};
use crate::hop::AlgorithmSpec;
use crate::model::{Channel, Scenario};
use crate::scenario::{
    generate_scenario, validate_scenario, ScenarioFile, ScenarioProvenance,
};
use crate::seeding::{derive_seed, streams};

use super::aggregate::{aggregate_records, AggregateRow};
use super::config::ExperimentConfig;
use super::HarnessError;

/// One row of the raw results table. `ttd`/`ttr` are empty when the event
/// was not observed before the run stopped; `censored` is true exactly when
/// discovery did not complete within the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_index: usize,
    pub n_common: Channel,
    pub algorithm: AlgorithmSpec,
    pub run_seed: u64,
    pub ttd: Option<u32>,
    pub ttr: Option<u32>,
    pub censored: bool,
}

/// A scenario that could not be generated (connectivity never reached).
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationFailure {
    pub n_common: Channel,
    pub scenario_index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    /// Sorted by (n_common, algorithm, scenario_index).
    pub records: Vec<RunRecord>,
    pub rows: Vec<AggregateRow>,
    pub failures: Vec<GenerationFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Serial,
    Parallel,
}

/// Topology and channel seeds for one scenario slot. Topology seeds depend
/// only on the scenario index, so every grid point reuses the same
/// placements and only the channel structure varies.
pub fn scenario_seeds(master_seed: u64, n_common: Channel, index: usize) -> (u64, u64) {
    (
        derive_seed(master_seed, &[streams::TOPOLOGY, index as u64]),
        derive_seed(master_seed, &[streams::CHANNELS, n_common as u64, index as u64]),
    )
}

/// Run seed for one scenario slot, shared by every algorithm on that
/// scenario so comparisons see common randomness where streams overlap.
pub fn run_seed_for(master_seed: u64, n_common: Channel, index: usize) -> u64 {
    derive_seed(
        master_seed,
        &[streams::RUN, n_common as u64, index as u64],
    )
}

/// Horizon actually handed to the engine. Rules that are guaranteed to
/// finish within one sweep period never need more than `n` slots; the
/// unbounded rules (randomized Π and random hop) get the configured horizon.
pub fn effective_t_max(algorithm: &AlgorithmSpec, n_channels: Channel, t_max: u32) -> u32 {
    if algorithm.completes_within_period() {
        t_max.min(n_channels as u32)
    } else {
        t_max
    }
}

fn sorted_grid(config: &ExperimentConfig) -> Vec<Channel> {
    let mut grid = config.n_common_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Generates every scenario of the experiment grid, in deterministic
/// (n_common, index) order. Failures are reported per slot.
pub fn generate_grid_scenarios(
    config: &ExperimentConfig,
    mode: ExecMode,
) -> Vec<(Channel, usize, Result<Scenario, String>)> {
    let grid = sorted_grid(config);
    let jobs: Vec<(Channel, usize)> = grid
        .iter()
        .flat_map(|&m| (0..config.n_scenarios).map(move |i| (m, i)))
        .collect();
    let gen_one = |&(n_common, index): &(Channel, usize)| {
        let params = config.scenario_params.with_n_common(n_common);
        let (topology_seed, channel_seed) =
            scenario_seeds(config.master_seed, n_common, index);
        let result = generate_scenario(&params, topology_seed, channel_seed)
            .map(|(scenario, _)| scenario)
            .map_err(|e| e.to_string());
        (n_common, index, result)
    };
    match mode {
        ExecMode::Serial => jobs.iter().map(gen_one).collect(),
        ExecMode::Parallel => jobs.par_iter().map(gen_one).collect(),
    }
}

/// Runs the whole experiment: for every common-set size in the grid,
/// generate `n_scenarios` scenarios and run each configured algorithm on
/// every one. Output is fully determined by the configuration; serial and
/// parallel modes produce identical records.
pub fn run_experiment(
    config: &ExperimentConfig,
    mode: ExecMode,
) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let scenarios = generate_grid_scenarios(config, mode);

    let mut failures = Vec::new();
    let mut valid: Vec<(Channel, usize, Scenario)> = Vec::new();
    for (n_common, index, result) in scenarios {
        match result {
            Ok(scenario) => {
                debug_assert!(validate_scenario(&scenario).is_empty());
                valid.push((n_common, index, scenario));
            }
            Err(message) => failures.push(GenerationFailure {
                n_common,
                scenario_index: index,
                message,
            }),
        }
    }

    let jobs: Vec<(usize, AlgorithmSpec)> = (0..valid.len())
        .flat_map(|slot| config.algorithms.iter().map(move |&a| (slot, a)))
        .collect();
    let run_one = |&(slot, algorithm): &(usize, AlgorithmSpec)| -> RunRecord {
        let (n_common, index, ref scenario) = valid[slot];
        let run_seed = run_seed_for(config.master_seed, n_common, index);
        let engine_config = EngineConfig {
            t_max: effective_t_max(&algorithm, scenario.n_channels(), config.t_max),
            algorithm,
            run_seed,
        };
        let result = run_discovery(scenario, &engine_config);
        RunRecord {
            scenario_index: index,
            n_common,
            algorithm,
            run_seed,
            ttd: result.ttd.observed(),
            ttr: result.ttr.observed(),
            censored: result.ttd.observed().is_none(),
        }
    };
    let mut records: Vec<RunRecord> = match mode {
        ExecMode::Serial => jobs.iter().map(run_one).collect(),
        ExecMode::Parallel => jobs.par_iter().map(run_one).collect(),
    };

    records.sort_by(|a, b| {
        (a.n_common, a.algorithm.to_string(), a.scenario_index).cmp(&(
            b.n_common,
            b.algorithm.to_string(),
            b.scenario_index,
        ))
    });
    let rows = aggregate_records(&records, config.mttd_batch_size)?;
    Ok(ExperimentOutput {
        records,
        rows,
        failures,
    })
}

// ---------------------------------------------------------------------------
// CSV I/O
// ---------------------------------------------------------------------------

pub fn write_raw_csv(records: &[RunRecord], path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path)?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_raw_csv(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut records = Vec::new();
    for row in reader.deserialize() {
        records.push(row?);
    }
    Ok(records)
}

pub fn write_aggregate_csv(rows: &[AggregateRow], path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_aggregate_csv(path: &Path) -> Result<Vec<AggregateRow>, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub struct OutputPaths {
    pub raw_csv: PathBuf,
    pub aggregate_csv: PathBuf,
}

/// Writes the raw and aggregate tables under `dir` (created if missing).
pub fn write_outputs(output: &ExperimentOutput, dir: &Path) -> Result<OutputPaths, HarnessError> {
    fs::create_dir_all(dir)?;
    let raw_csv = dir.join("raw.csv");
    let aggregate_csv = dir.join("aggregate.csv");
    write_raw_csv(&output.records, &raw_csv)?;
    write_aggregate_csv(&output.rows, &aggregate_csv)?;
    Ok(OutputPaths {
        raw_csv,
        aggregate_csv,
    })
}

/// Writes every generated scenario of the grid as a JSON file under `dir`,
/// named `scenario_c<n_common>_i<index>.json`. Returns the written paths.
pub fn write_grid_scenarios(
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<(Vec<PathBuf>, Vec<GenerationFailure>), HarnessError> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    let mut failures = Vec::new();
    for (n_common, index, result) in generate_grid_scenarios(config, ExecMode::Parallel) {
        match result {
            Ok(scenario) => {
                let (topology_seed, channel_seed) =
                    scenario_seeds(config.master_seed, n_common, index);
                let file = ScenarioFile::from_scenario(
                    &scenario,
                    ScenarioProvenance {
                        master_seed: config.master_seed,
                        scenario_index: index,
                        topology_seed,
                        channel_seed,
                    },
                );
                let path = dir.join(format!("scenario_c{n_common}_i{index}.json"));
                file.save(&path)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                paths.push(path);
            }
            Err(message) => failures.push(GenerationFailure {
                n_common,
                scenario_index: index,
                message,
            }),
        }
    }
    Ok((paths, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        let mut config = ExperimentConfig::desk();
        config.scenario_params.n_channels = 16;
        config.scenario_params.n_users = 5;
        config.scenario_params.su_range = 700.0;
        config.scenario_params.n_pus = 3;
        config.scenario_params.pu_range = 900.0;
        config.n_scenarios = 6;
        config.mttd_batch_size = 3;
        config.t_max = 256;
        config.n_common_grid = vec![2, 4];
        config.algorithms = vec![
            AlgorithmSpec::Sweep,
            AlgorithmSpec::PseudoRandomSweep,
            AlgorithmSpec::StickTogether { n_th: 2, k_th: 3 },
        ];
        config
    }

    #[test]
    fn serial_and_parallel_agree() {
        let config = tiny_config();
        let serial = run_experiment(&config, ExecMode::Serial).unwrap();
        let parallel = run_experiment(&config, ExecMode::Parallel).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn records_are_sorted_and_complete() {
        let config = tiny_config();
        let output = run_experiment(&config, ExecMode::Parallel).unwrap();
        assert!(output.failures.is_empty());
        assert_eq!(
            output.records.len(),
            config.n_scenarios * config.n_common_grid.len() * config.algorithms.len()
        );
        let keys: Vec<_> = output
            .records
            .iter()
            .map(|r| (r.n_common, r.algorithm.to_string(), r.scenario_index))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn csv_round_trips_and_reaggregates_identically() {
        let config = tiny_config();
        let output = run_experiment(&config, ExecMode::Parallel).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = write_outputs(&output, dir.path()).unwrap();

        let records = read_raw_csv(&paths.raw_csv).unwrap();
        assert_eq!(records, output.records);
        let rows = aggregate_records(&records, config.mttd_batch_size).unwrap();
        assert_eq!(rows, output.rows);
        let read_rows = read_aggregate_csv(&paths.aggregate_csv).unwrap();
        assert_eq!(read_rows, output.rows);
    }

    #[test]
    fn raw_csv_schema_is_stable() {
        let record = RunRecord {
            scenario_index: 0,
            n_common: 4,
            algorithm: AlgorithmSpec::StickTogether { n_th: 5, k_th: 30 },
            run_seed: 12345,
            ttd: Some(17),
            ttr: None,
            censored: false,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        write_raw_csv(&[record], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "scenario_index,n_common,algorithm,run_seed,ttd,ttr,censored\n\
             0,4,\"stick:5,30\",12345,17,,false\n"
        );
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let config = tiny_config();
        let dir = tempfile::tempdir().unwrap();
        let a_dir = dir.path().join("a");
        let b_dir = dir.path().join("b");
        let out_a = run_experiment(&config, ExecMode::Serial).unwrap();
        let out_b = run_experiment(&config, ExecMode::Parallel).unwrap();
        let a = write_outputs(&out_a, &a_dir).unwrap();
        let b = write_outputs(&out_b, &b_dir).unwrap();
        assert_eq!(
            std::fs::read(&a.raw_csv).unwrap(),
            std::fs::read(&b.raw_csv).unwrap()
        );
        assert_eq!(
            std::fs::read(&a.aggregate_csv).unwrap(),
            std::fs::read(&b.aggregate_csv).unwrap()
        );
    }

    #[test]
    fn effective_horizon_clamps_period_bound_rules() {
        assert_eq!(effective_t_max(&AlgorithmSpec::Sweep, 64, 4096), 64);
        assert_eq!(effective_t_max(&AlgorithmSpec::Sweep, 64, 32), 32);
        assert_eq!(effective_t_max(&AlgorithmSpec::PiRandomized, 64, 4096), 4096);
        assert_eq!(effective_t_max(&AlgorithmSpec::RandomHop, 64, 4096), 4096);
        assert_eq!(
            effective_t_max(&AlgorithmSpec::StickTogether { n_th: 5, k_th: 30 }, 64, 4096),
            64
        );
    }

    #[test]
    fn grid_scenarios_write_and_reload() {
        let mut config = tiny_config();
        config.n_scenarios = 2;
        let dir = tempfile::tempdir().unwrap();
        let (paths, failures) = write_grid_scenarios(&config, dir.path()).unwrap();
        assert!(failures.is_empty());
        assert_eq!(paths.len(), 4);
        let file = ScenarioFile::load(&paths[0]).unwrap();
        let scenario = file.to_scenario().unwrap();
        assert!(validate_scenario(&scenario).is_empty());
    }
}
