//! Integral identities over a surface corpus.

use rayon::prelude::*;
use willmore_core::canonical::monotonicity_integral;
use willmore_core::{SurfaceGeometry, TWO_PI_SQ};

use super::{rng, unit_vector};
use crate::config::ExperimentConfig;
use crate::output::{num, Check, Csv, OutputDir};

/// Relative tolerance of `int (|A|^2 + 2) dA = 4 W`.
pub const AMBIENT_TOL: f64 = 1e-6;
/// Tolerance of `|int K dA| / Area`.
pub const GAUSS_BONNET_TOL: f64 = 1e-8;
/// Slack of the monotonicity bound and of `W >= 2 pi^2`.
pub const BOUND_SLACK: f64 = 1e-6;

struct Row {
    surface: String,
    identity: &'static str,
    residual: f64,
    threshold: f64,
}

impl Row {
    fn pass(&self) -> bool {
        self.residual <= self.threshold
    }
}

pub fn run(config: &ExperimentConfig, out: &mut OutputDir) -> anyhow::Result<Vec<Check>> {
    let p = &config.identities;
    let grid = config.torus_grid();
    let mut r = rng(config.seed);
    let centers: Vec<_> = (0..p.monotonicity_samples)
        .map(|_| unit_vector(&mut r) * p.monotonicity_radius)
        .collect();
    let per_surface: Vec<Vec<Row>> = config
        .surface_list()
        .par_iter()
        .map(|spec| -> anyhow::Result<Vec<Row>> {
            let f = spec.build(grid)?;
            let geom = SurfaceGeometry::compute(&f)?;
            let w = geom.willmore_energy();
            let monotone = centers
                .iter()
                .map(|v| monotonicity_integral(&f, &geom, v) - w)
                .fold(f64::NEG_INFINITY, f64::max);
            let row = |identity, residual, threshold| Row {
                surface: spec.name.clone(),
                identity,
                residual,
                threshold,
            };
            Ok(vec![
                row(
                    "ambient-second-form",
                    (geom.ambient_second_form_energy() - 4.0 * w).abs() / (4.0 * w),
                    AMBIENT_TOL,
                ),
                row(
                    "gauss-bonnet",
                    geom.total_gauss_curvature().abs() / geom.area(),
                    GAUSS_BONNET_TOL,
                ),
                row("monotonicity", monotone, BOUND_SLACK),
                row("willmore-lower-bound", TWO_PI_SQ - w, BOUND_SLACK),
            ])
        })
        .collect::<anyhow::Result<_>>()?;

    let mut csv = Csv::new(&["surface", "identity", "residual", "threshold", "pass"]);
    let mut checks = Vec::new();
    for row in per_surface.iter().flatten() {
        csv.row(&[
            row.surface.clone(),
            row.identity.to_string(),
            num(row.residual),
            num(row.threshold),
            row.pass().to_string(),
        ]);
        checks.push(Check::at_most(
            format!("{}/{}", row.surface, row.identity),
            row.residual,
            row.threshold,
        ));
    }
    out.write("identities.csv", &csv.finish())?;
    Ok(checks)
}
