//! Command-line front end for the newswalk market simulator.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use newswalk_core::experiment::{DEFAULT_MAX_LAG, DEFAULT_REALIZATIONS};
use newswalk_core::io::{
    analyze_prices, format_number, ingest_prices, parse_config, write_acf_table, write_analysis,
    write_path_table, write_report, write_series, write_tail_table,
};
use newswalk_core::stats::{fit_power_law, DEFAULT_MIN_TAIL};
use newswalk_core::{returns_from_prices, run_scenario_with, simulate, Preset, ScenarioPreset};

#[derive(Parser)]
#[command(name = "newswalk", version, about = "Heterogeneous-agent market simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run from a configuration file and write its series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the `seed` key of the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the `steps` key of the configuration.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a preset over several seeds and write a report with plot tables.
    Scenario {
        #[arg(long)]
        preset: Preset,
        #[arg(long, default_value_t = DEFAULT_REALIZATIONS)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_LAG)]
        max_lag: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute stylized-fact statistics of a price column in a CSV file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, default_value_t = DEFAULT_MAX_LAG)]
        max_lag: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_TAIL)]
        min_tail: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a power-law tail to absolute percent returns of a price column.
    FitTail {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, default_value_t = DEFAULT_MIN_TAIL)]
        min_tail: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            steps,
            out,
        } => {
            let parsed = parse_config(&read(&config)?)
                .with_context(|| format!("invalid configuration {}", config.display()))?;
            let mut cfg = parsed.config;
            if let Some(steps) = steps {
                cfg.steps = steps;
            }
            let seed = seed.unwrap_or(parsed.runner.seed);
            let series = simulate(&cfg, seed)?;
            write_series(&series, create(&out)?)?;
        }
        Command::Scenario {
            preset,
            realizations,
            seed,
            steps,
            max_lag,
            out,
        } => {
            let scenario = match steps {
                Some(steps) => ScenarioPreset::with_steps(preset, steps),
                None => ScenarioPreset::new(preset),
            };
            let report =
                run_scenario_with(&scenario, realizations, seed, max_lag, DEFAULT_MIN_TAIL)?;
            fs::create_dir_all(&out)
                .with_context(|| format!("cannot create {}", out.display()))?;
            write_report(&report, create(&out.join("report.txt"))?)?;
            write_acf_table(&report, create(&out.join("acf.csv"))?)?;
            if let Some(curve) = report.pooled_tail.value() {
                write_tail_table(curve, create(&out.join("tail_curve.csv"))?)?;
            }
            if let Ok(series) = simulate(&scenario.config, seed) {
                write_path_table(&series, create(&out.join("path.csv"))?)?;
            }
        }
        Command::Analyze {
            input,
            column,
            max_lag,
            min_tail,
            out,
        } => {
            let table = ingest_prices(&read(&input)?, &column)?;
            let report = analyze_prices(&table, max_lag, min_tail)?;
            write_analysis(&report, create(&out)?)?;
        }
        Command::FitTail {
            input,
            column,
            min_tail,
        } => {
            let table = ingest_prices(&read(&input)?, &column)?;
            let returns = returns_from_prices(&table.prices)?;
            let abs: Vec<f64> = returns.iter().map(|r| r.abs() * 100.0).collect();
            let fit = fit_power_law(&abs, min_tail)?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "alpha={}", format_number(fit.alpha))?;
            writeln!(stdout, "xmin={}", format_number(fit.xmin))?;
            writeln!(stdout, "ks={}", format_number(fit.ks))?;
            writeln!(stdout, "n_tail={}", fit.n_tail)?;
            writeln!(stdout, "n={}", fit.n)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
