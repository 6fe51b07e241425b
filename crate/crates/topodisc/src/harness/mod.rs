//! Experiment orchestration: configuration, batch execution across
//! scenarios and algorithms, aggregation, CSV emission, SVG comparison
//! charts, and the built-in verification suites.

mod aggregate;
mod config;
mod experiment;
mod plot;
mod verify;

pub use aggregate::{
    aggregate_ettd, aggregate_mttd, aggregate_records, bootstrap_mean_ci, percentile, AggregateRow,
};
pub use config::ExperimentConfig;
pub use experiment::{
    effective_t_max, generate_grid_scenarios, read_aggregate_csv, read_raw_csv, run_experiment,
    run_seed_for, scenario_seeds, write_aggregate_csv, write_grid_scenarios,
    write_outputs, write_raw_csv, ExecMode, ExperimentOutput, GenerationFailure, OutputPaths,
    RunRecord,
};
pub use plot::{emit_plot, render_plot, Metric};
pub use verify::{
    check_correlation_contrast, check_markov_theorem, check_pi_ettr_oracle,
    check_random_ettr_oracle, check_ring_decomposition_exhaustive,
    monte_carlo_expected_first_success, run_suite, sample_pair_sets, Check, SuiteReport,
    VerifySuite, VERIFY_SEED,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty sample")]
    EmptySample,
    #[error("sample count {len} not divisible by batch size {batch}")]
    IndivisibleBatches { len: usize, batch: usize },
    #[error("nothing to plot")]
    EmptyPlot,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl PartialEq for HarnessError {
    fn eq(&self, other: &Self) -> bool {
        // IO and CSV errors compare by message; the structured variants by
        // structure. Only used in tests.
        format!("{self}") == format!("{other}")
    }
}
