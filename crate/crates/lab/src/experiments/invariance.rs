//! Conformal invariance of `W` and of the trace-free energy.

use rayon::prelude::*;
use serde::Serialize;
use willmore_core::canonical::resolving_grid;
use willmore_core::{ConformalCenter, Point4, SurfaceGeometry};

use super::{rng, unit_vector};
use crate::config::ExperimentConfig;
use crate::output::{num, opt, Check, Csv, OutputDir};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceRow {
    pub surface: String,
    pub v: [f64; 4],
    pub radius: f64,
    pub willmore: Option<f64>,
    pub tracefree_energy: Option<f64>,
    pub willmore_drift: Option<f64>,
    pub tracefree_drift: Option<f64>,
    pub error: Option<String>,
}

/// The identity center first, then `directionsPerRadius` random centers per radius,
/// then the explicit centers.
pub fn centers(config: &ExperimentConfig) -> Vec<Point4> {
    let p = &config.invariance;
    let mut r = rng(config.seed);
    let mut out = vec![Point4::zeros()];
    for &radius in &p.radii {
        for _ in 0..p.directions_per_radius {
            out.push(unit_vector(&mut r) * radius);
        }
    }
    out.extend(p.centers.iter().map(|v| Point4::from(*v)));
    out
}

pub fn run(config: &ExperimentConfig, out: &mut OutputDir) -> anyhow::Result<Vec<Check>> {
    let grid = config.torus_grid();
    let p = &config.invariance;
    let centers = centers(config);
    let mut rows = Vec::new();
    for spec in config.surface_list() {
        let f = spec.build(grid)?;
        let base = SurfaceGeometry::compute(&f)?;
        let (w0, a0) = (base.willmore_energy(), base.tracefree_energy());
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        let surface_rows: Vec<InvarianceRow> = centers
            .par_iter()
            .map(|v| {
                let measured = ConformalCenter::new(*v).and_then(|c| {
                    if c.norm() == 0.0 {
                        return Ok((w0, a0));
                    }
                    let fine = f.resample(resolving_grid(&c, &f, p.max_grid)?)?;
                    let image = SurfaceGeometry::compute(&c.transform(&fine)?)?;
                    Ok((image.willmore_energy(), image.tracefree_energy()))
                });
                let (values, error) = match measured {
                    Ok(pair) => (Some(pair), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                InvarianceRow {
                    surface: spec.name.clone(),
                    v: (*v).into(),
                    radius: v.norm(),
                    willmore: values.map(|x| x.0),
                    tracefree_energy: values.map(|x| x.1),
                    willmore_drift: values.map(|x| rel(x.0, w0)),
                    tracefree_drift: values.map(|x| rel(x.1, a0)),
                    error,
                }
            })
            .collect();
        rows.extend(surface_rows);
    }

    let mut csv = Csv::new(&[
        "surface",
        "v0",
        "v1",
        "v2",
        "v3",
        "radius",
        "W",
        "tracefreeEnergy",
        "wDrift",
        "tracefreeDrift",
        "status",
    ]);
    for r in &rows {
        csv.row(&[
            r.surface.clone(),
            num(r.v[0]),
            num(r.v[1]),
            num(r.v[2]),
            num(r.v[3]),
            num(r.radius),
            opt(r.willmore),
            opt(r.tracefree_energy),
            opt(r.willmore_drift),
            opt(r.tracefree_drift),
            r.error.clone().unwrap_or_else(|| "ok".to_string()),
        ]);
    }
    out.write("invariance.csv", &csv.finish())?;

    let max_over = |sel: fn(&InvarianceRow) -> Option<f64>, identity: bool| {
        rows.iter()
            .filter(|r| (r.radius == 0.0) == identity)
            .filter_map(sel)
            .fold(0.0f64, f64::max)
    };
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let identity_drift = max_over(|r| r.willmore_drift, true).max(max_over(|r| r.tracefree_drift, true));
    Ok(vec![
        Check::at_most("maxWillmoreDrift", max_over(|r| r.willmore_drift, false), p.tolerance),
        Check::at_most("maxTracefreeDrift", max_over(|r| r.tracefree_drift, false), p.tolerance),
        Check::at_most("identityRowDrift", identity_drift, 0.0),
        Check::at_most("failedRows", failed as f64, 0.0),
    ])
}
