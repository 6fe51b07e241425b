//! A miniature of the full comparison experiment: six rules across a grid of
//! common-set sizes, aggregated into mean and batched-max discovery times,
//! written out as CSVs and an SVG chart.
//!
//! ```bash
//! cargo run -p topodisc --example ettd_comparison
//! ```

use topodisc::harness::{
    emit_plot, run_experiment, write_outputs, ExecMode, ExperimentConfig, Metric,
};
use topodisc::hop::AlgorithmSpec;
use topodisc::scenario::ScenarioParams;

fn main() {
    let config = ExperimentConfig {
        scenario_params: ScenarioParams {
            n_channels: 32,
            n_users: 8,
            area_side: 1000.0,
            su_range: 600.0,
            n_pus: 4,
            pu_range: 800.0,
            n_common: 2,
            max_resample_attempts: 1000,
        },
        n_scenarios: 30,
        algorithms: vec![
            AlgorithmSpec::Sweep,
            AlgorithmSpec::SweepRandom,
            AlgorithmSpec::SweepForward,
            AlgorithmSpec::PiRandomized,
            AlgorithmSpec::PseudoRandomSweep,
            AlgorithmSpec::StickTogether { n_th: 2, k_th: 3 },
        ],
        mttd_batch_size: 10,
        master_seed: 11,
        t_max: 512,
        n_common_grid: vec![2, 4, 8],
        output_dir: std::env::temp_dir().join("topodisc_ettd_demo"),
    };

    let output = run_experiment(&config, ExecMode::Parallel).expect("experiment runs");
    println!(
        "{:>8} {:>12} {:>8} {:>10} {:>8}",
        "n_common", "algorithm", "ettd", "stderr", "mttd"
    );
    for row in &output.rows {
        println!(
            "{:>8} {:>12} {:>8.2} {:>10.2} {:>8.2}",
            row.n_common,
            row.algorithm.to_string(),
            row.ettd.unwrap_or(f64::NAN),
            row.ettd_stderr.unwrap_or(f64::NAN),
            row.mttd.unwrap_or(f64::NAN),
        );
    }

    let paths = write_outputs(&output, &config.output_dir).unwrap();
    emit_plot(
        &output.rows,
        Metric::Ettd,
        &config.output_dir.join("ettd.svg"),
    )
    .unwrap();
    println!("\nraw:   {}", paths.raw_csv.display());
    println!("agg:   {}", paths.aggregate_csv.display());
    println!("chart: {}", config.output_dir.join("ettd.svg").display());
}
