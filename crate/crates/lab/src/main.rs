use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use willmore_lab::{resolve_output_dir, run_experiment, ConfigError, ExperimentConfig, ExperimentKind};

/// Exit code when a threshold check fails.
const EXIT_CHECKS: u8 = 1;
/// Exit code for an invalid configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit code for a failure while computing or writing output.
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "willmore-lab", version, about = "Experiments on Willmore tori in the three-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conformal invariance of W and the trace-free energy
    Invariance(RunArgs),
    /// Heintze-Karcher sweep over the canonical family
    Sweep(RunArgs),
    /// Conformal images as the center approaches the sphere
    Boundary(RunArgs),
    /// Rigidity quantities along a one-mode family
    Stability(RunArgs),
    /// Integral identities over a surface corpus
    Identities(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration; defaults are used without one
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random direction sets
    #[arg(long)]
    seed: Option<u64>,
    /// Base grid as NxM, for example 64x64
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,
}

fn parse_grid(text: &str) -> Result<[usize; 2], String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    Ok([parse(a)?, parse(b)?])
}

fn load(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::new(kind),
    };
    if config.experiment != kind {
        return Err(ConfigError::Invalid {
            field: "experiment".into(),
            message: format!(
                "config is for {} but the subcommand runs {}",
                config.experiment.name(),
                kind.name()
            ),
        });
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(grid) = args.grid {
        config.grid = Some(grid);
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Invariance(a) => (ExperimentKind::Invariance, a),
        Command::Sweep(a) => (ExperimentKind::CanonicalSweep, a),
        Command::Boundary(a) => (ExperimentKind::Boundary, a),
        Command::Stability(a) => (ExperimentKind::StabilityScaling, a),
        Command::Identities(a) => (ExperimentKind::Identities, a),
    };
    let config = match load(kind, args) {
        Ok(c) => c,
        Err(e) => {
            let location = e.location();
            println!(
                "{}",
                json!({
                    "status": "config-error",
                    "field": e.field(),
                    "line": location.map(|l| l.0),
                    "column": location.map(|l| l.1),
                    "message": e.to_string(),
                })
            );
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let out = resolve_output_dir(&config, args.out.as_deref());
    match run_experiment(&config, &out) {
        Ok(outcome) => {
            println!("{}", outcome.summary_json());
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECKS)
            }
        }
        Err(e) => {
            println!("{}", json!({"status": "error", "message": format!("{e:#}")}));
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
