use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use cogradar::cli::{self, Preset, RunRequest, ScenarioSource};
use cogradar::scenario::EnvironmentMode;
use cogradar::waveform::Strategy;
use cogradar::Error;

/// Monte-Carlo comparison of transmit strategies for cognitive multi-target tracking.
#[derive(Debug, Parser)]
#[command(name = "cogradar", version)]
#[command(group(ArgGroup::new("source").required(true).args(["scenario", "preset"])))]
struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Built-in scenario: paper or desk.
    #[arg(long)]
    preset: Option<Preset>,
    /// Comma-separated subset of orthogonal,uniform,power-aware.
    #[arg(long, value_delimiter = ',')]
    strategies: Vec<Strategy>,
    /// Monte-Carlo runs per strategy.
    #[arg(long, default_value_t = 20)]
    runs: usize,
    /// Master seed; overrides the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// analytic or signal; overrides the scenario's.
    #[arg(long)]
    mode: Option<EnvironmentMode>,
    /// Check the scenario and exit.
    #[arg(long)]
    validate: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let source = match (args.scenario, args.preset) {
        (Some(path), _) => ScenarioSource::File(path),
        (None, Some(p)) => ScenarioSource::Preset(p),
        (None, None) => unreachable!("clap enforces the source group"),
    };

    if args.validate {
        return match cli::validate(&source) {
            Ok(report) => {
                println!("{report}");
                if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(2) }
            }
            Err(e) => fail(e),
        };
    }

    let req = RunRequest {
        source,
        strategies: args.strategies,
        n_runs: args.runs,
        seed: args.seed,
        mode: args.mode,
        out_dir: args.out,
    };
    match cli::run(&req) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    let usage = matches!(
        e,
        Error::ConfigParse { .. }
            | Error::ConfigRead { .. }
            | Error::Validation(_)
            | Error::InvalidParameter(_)
            | Error::Json(_)
    );
    ExitCode::from(if usage { 2 } else { 1 })
}
