//! Batch experiments on tori in `S^3`: conformal invariance, the canonical family
//! sweep, boundary behavior, stability scaling and integral identities.
//!
//! Every experiment writes CSV/JSON/SVG files into an output directory together
//! with `checks.json`, the list of asserted thresholds. Output is a pure function
//! of the configuration and seed.

// `!(x <= tol)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};

use serde::Serialize;

pub mod config;
pub mod experiments;
pub mod fit;
pub mod output;
pub mod svg;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind, SurfaceSpec};
pub use output::{Check, Outcome, OutputDir};

/// Runs one experiment into `out`, creating the directory if needed.
pub fn run_experiment(config: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    config.validate()?;
    let mut dir = OutputDir::create(out)?;
    let echoed = ExperimentConfig {
        output_dir: None,
        ..config.clone()
    };
    dir.write_json("config.json", &echoed)?;
    let checks = match config.experiment {
        ExperimentKind::Invariance => experiments::invariance::run(config, &mut dir)?,
        ExperimentKind::CanonicalSweep => experiments::sweep::run(config, &mut dir)?,
        ExperimentKind::Boundary => experiments::boundary::run(config, &mut dir)?,
        ExperimentKind::StabilityScaling => experiments::stability::run(config, &mut dir)?,
        ExperimentKind::Identities => experiments::identities::run(config, &mut dir)?,
    };

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct ChecksFile<'a> {
        experiment: ExperimentKind,
        seed: u64,
        grid: [usize; 2],
        passed: bool,
        checks: &'a [Check],
    }
    dir.write_json(
        "checks.json",
        &ChecksFile {
            experiment: config.experiment,
            seed: config.seed,
            grid: config.grid_size(),
            passed: checks.iter().all(|c| c.pass),
            checks: &checks,
        },
    )?;
    Ok(Outcome {
        experiment: config.experiment,
        output_dir: out.to_path_buf(),
        files: dir.files().to_vec(),
        checks,
    })
}

/// Output directory: explicit override, then the config's, then `lab-output/<experiment>`.
pub fn resolve_output_dir(config: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("lab-output").join(config.experiment.name()))
}
