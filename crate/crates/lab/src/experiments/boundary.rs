//! Conformal images as the center approaches the sphere.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use willmore_core::canonical::{conformal_image_area, geodesic_sphere_fit, hausdorff_distance, warped_image_cloud};
use willmore_core::{ConformalCenter, Immersion, Point4, SurfaceGeometry, TorusGrid, TWO_PI_SQ};

use super::{ascending_from, non_decreasing_steps};
use crate::config::ExperimentConfig;
use crate::output::{num, opt, Check, Csv, OutputDir};

/// Radii from which the monotone trends are asserted.
pub const TREND_FROM_RADIUS: f64 = 0.9;
/// Radius at which the limiting values are asserted.
pub const LIMIT_RADIUS: f64 = 0.99;
/// Allowed relative distance from `4 pi` for the on-surface pole at the limit radius.
pub const GREAT_SPHERE_BAND: f64 = 0.1;
/// Largest area allowed for the off-surface pole at the limit radius.
pub const COLLAPSED_AREA: f64 = 1.0;
/// Tolerance for the area at `v = 0` on the Clifford torus.
pub const IDENTITY_AREA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryRow {
    pub radius: f64,
    pub pole_on_surface: bool,
    pub area: Option<f64>,
    pub sphere_fit_residual: Option<f64>,
    pub hausdorff: Option<f64>,
    pub error: Option<String>,
}

pub fn run(config: &ExperimentConfig, out: &mut OutputDir) -> anyhow::Result<Vec<Check>> {
    let p = &config.boundary;
    let spec = config.surface_list().remove(0);
    let base = spec.build(config.torus_grid())?;
    let fine = base.resample(TorusGrid::square(p.area_grid)?)?;
    let fine_geom = SurfaceGeometry::compute(&fine)?;
    let focus = (p.focus[0], p.focus[1]);
    let on_pole = base.evaluate_tensor(&[focus.0], &[focus.1])[0];
    let off_pole = Point4::from(p.off_pole).normalize();

    let cases: Vec<(f64, bool)> = p
        .radii
        .iter()
        .flat_map(|&r| [(r, true), (r, false)])
        .collect();
    let rows: Vec<BoundaryRow> = cases
        .par_iter()
        .map(|&(radius, on)| {
            let pole = if on { on_pole } else { off_pole };
            match measure(&base, &fine, &fine_geom, &pole, on, radius, focus, p.cloud_size, p.sphere_samples) {
                Ok((area, rms, hd)) => BoundaryRow {
                    radius,
                    pole_on_surface: on,
                    area: Some(area),
                    sphere_fit_residual: Some(rms),
                    hausdorff: Some(hd),
                    error: None,
                },
                Err(e) => BoundaryRow {
                    radius,
                    pole_on_surface: on,
                    area: None,
                    sphere_fit_residual: None,
                    hausdorff: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let mut csv = Csv::new(&["radius", "poleOnSurface", "area", "sphereFitResidual", "hausdorff", "status"]);
    for r in &rows {
        csv.row(&[
            num(r.radius),
            r.pole_on_surface.to_string(),
            opt(r.area),
            opt(r.sphere_fit_residual),
            opt(r.hausdorff),
            r.error.clone().unwrap_or_else(|| "ok".to_string()),
        ]);
    }
    out.write("boundary.csv", &csv.finish())?;

    let series = |on: bool| -> Vec<&BoundaryRow> {
        let sub: Vec<&BoundaryRow> = rows.iter().filter(|r| r.pole_on_surface == on).collect();
        let radii: Vec<f64> = sub.iter().map(|r| r.radius).collect();
        ascending_from(&radii, TREND_FROM_RADIUS).into_iter().map(|i| sub[i]).collect()
    };
    let values = |rows: &[&BoundaryRow], sel: fn(&BoundaryRow) -> Option<f64>| -> Vec<f64> {
        rows.iter().map(|r| sel(r).unwrap_or(f64::NAN)).collect()
    };
    let at = |on: bool, radius: f64| rows.iter().find(|r| r.pole_on_surface == on && r.radius == radius);

    let mut checks = vec![Check::at_most(
        "failedRows",
        rows.iter().filter(|r| r.error.is_some()).count() as f64,
        0.0,
    )];
    let on = series(true);
    let off = series(false);
    if on.len() >= 2 {
        checks.push(Check::at_most(
            "onPoleAreaNonDecreasingSteps",
            non_decreasing_steps(&values(&on, |r| r.area)) as f64,
            0.0,
        ));
        checks.push(Check::at_most(
            "onPoleHausdorffNonDecreasingSteps",
            non_decreasing_steps(&values(&on, |r| r.hausdorff)) as f64,
            0.0,
        ));
        checks.push(Check::at_most(
            "offPoleAreaNonDecreasingSteps",
            non_decreasing_steps(&values(&off, |r| r.area)) as f64,
            0.0,
        ));
    }
    if let Some(r) = at(true, LIMIT_RADIUS) {
        let area = r.area.unwrap_or(f64::NAN);
        checks.push(Check::at_most(
            "onPoleAreaRelativeToFourPi",
            (area / (4.0 * PI) - 1.0).abs(),
            GREAT_SPHERE_BAND,
        ));
    }
    if let Some(r) = at(false, LIMIT_RADIUS) {
        checks.push(Check::at_most(
            "offPoleArea",
            r.area.unwrap_or(f64::NAN),
            COLLAPSED_AREA,
        ));
    }
    if spec.is_clifford() {
        if let Some(r) = at(true, 0.0) {
            checks.push(Check::at_most(
                "identityAreaError",
                (r.area.unwrap_or(f64::NAN) - TWO_PI_SQ).abs(),
                IDENTITY_AREA_TOL,
            ));
        }
    }
    Ok(checks)
}

#[allow(clippy::too_many_arguments)]
fn measure(
    base: &Immersion,
    fine: &Immersion,
    fine_geom: &SurfaceGeometry,
    pole: &Point4,
    on_surface: bool,
    radius: f64,
    focus: (f64, f64),
    cloud_size: usize,
    sphere_samples: usize,
) -> willmore_core::Result<(f64, f64, f64)> {
    let v = ConformalCenter::along(pole, radius)?;
    let area = conformal_image_area(&v, fine, fine_geom)?;
    // Warping toward the focus only helps when the blow-up happens there.
    let kappa = if on_surface { 1.0 / v.stereographic_frame().lambda } else { 1.0 };
    let cloud = warped_image_cloud(&v, base, focus, kappa, cloud_size)?;
    let fit = geodesic_sphere_fit(&cloud)?;
    let hd = hausdorff_distance(&cloud, &fit.sample(sphere_samples))?;
    Ok((area, fit.rms_residual, hd))
}
