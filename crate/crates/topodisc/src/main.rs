use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use topodisc::harness::{
    emit_plot, read_aggregate_csv, run_experiment, run_suite, write_grid_scenarios, write_outputs,
    ExecMode, ExperimentConfig, HarnessError, Metric, VerifySuite,
};

#[derive(Parser)]
#[command(
    name = "topodisc",
    version,
    about = "Multichannel topology discovery simulator and experiment harness"
)]
struct Cli {
    /// Experiment config (TOML). Defaults to the desk-scale preset.
    #[arg(long, global = true, conflicts_with = "paper")]
    config: Option<PathBuf>,
    /// Use the full-scale preset (256 channels, 100 users, 1000 scenarios).
    #[arg(long, global = true)]
    paper: bool,
    /// Override the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the experiment grid's scenarios as JSON files.
    Gen,
    /// Run the experiment: raw + aggregate CSVs and comparison charts.
    Run {
        /// Run single-threaded (results are identical either way).
        #[arg(long)]
        serial: bool,
    },
    /// Run a verification suite: theorem | oracles | decomposition | correlation.
    Verify { suite: String },
    /// Render a comparison chart from an aggregate CSV.
    Plot { csv: PathBuf, metric: String },
}

fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut config = if cli.paper {
        ExperimentConfig::paper()
    } else if let Some(path) = &cli.config {
        ExperimentConfig::load(path)?
    } else {
        ExperimentConfig::desk()
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, HarnessError> {
    match &cli.command {
        Command::Gen => {
            let config = resolve_config(cli)?;
            config.validate()?;
            let dir = config.output_dir.join("scenarios");
            let (paths, failures) = write_grid_scenarios(&config, &dir)?;
            println!("wrote {} scenario files to {}", paths.len(), dir.display());
            for f in &failures {
                eprintln!(
                    "generation failed: n_common={} index={}: {}",
                    f.n_common, f.scenario_index, f.message
                );
            }
            Ok(if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Run { serial } => {
            let config = resolve_config(cli)?;
            let mode = if *serial {
                ExecMode::Serial
            } else {
                ExecMode::Parallel
            };
            let output = run_experiment(&config, mode)?;
            let paths = write_outputs(&output, &config.output_dir)?;
            println!("raw records:    {}", paths.raw_csv.display());
            println!("aggregates:     {}", paths.aggregate_csv.display());
            for f in &output.failures {
                eprintln!(
                    "generation failed: n_common={} index={}: {}",
                    f.n_common, f.scenario_index, f.message
                );
            }
            for metric in [Metric::Ettd, Metric::Mttd] {
                let path = config.output_dir.join(format!("{metric}.svg"));
                match emit_plot(&output.rows, metric, &path) {
                    Ok(()) => println!("chart:          {}", path.display()),
                    Err(e) => eprintln!("skipping {metric} chart: {e}"),
                }
            }
            for row in &output.rows {
                println!(
                    "n_common={:<3} {:<16} ettd={:<10} mttd={:<10} censored={}",
                    row.n_common,
                    row.algorithm.to_string(),
                    row.ettd.map_or("-".into(), |v| format!("{v:.2}")),
                    row.mttd.map_or("-".into(), |v| format!("{v:.2}")),
                    row.censored_count
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let suite: VerifySuite = suite.parse()?;
            let report = run_suite(suite);
            for line in report.lines() {
                println!("{line}");
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Plot { csv, metric } => {
            let rows = read_aggregate_csv(csv)?;
            let metric: Metric = metric.parse()?;
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join(format!("{metric}.svg"));
            emit_plot(&rows, metric, &path)?;
            println!("chart: {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
