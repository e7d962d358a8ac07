//! Heintze-Karcher proxy over the canonical family.

use serde::Serialize;
use willmore_core::canonical::{
    low_discrepancy_directions_from, sweep, uniform_t_grid, CellStatus, SweepArgmax, SweepCell, SweepOptions,
    SweepTable, FIVE_PI_RADIUS,
};
use willmore_core::{SurfaceGeometry, TWO_PI_SQ};

use crate::config::ExperimentConfig;
use crate::output::{num, opt, Check, Csv, OutputDir};
use crate::svg;

/// Slack of the Heintze-Karcher bound `Area <= W`.
pub const WILLMORE_SLACK: f64 = 1e-6;
/// Tolerance on the value at the Clifford argmax.
pub const ARGMAX_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepSummary<'a> {
    surface: &'a str,
    willmore: f64,
    radii: &'a [f64],
    directions: &'a [[f64; 4]],
    t_steps: usize,
    cells: usize,
    argmax: Option<SweepArgmax>,
    max_area: Option<f64>,
    five_pi_radius: f64,
    proxy_exceedances: Vec<&'a SweepCell>,
    masked_cells: &'a [String],
}

pub fn run(config: &ExperimentConfig, out: &mut OutputDir) -> anyhow::Result<Vec<Check>> {
    let p = &config.sweep;
    let spec = config.surface_list().remove(0);
    let f = spec.build(config.torus_grid())?;
    let willmore = SurfaceGeometry::compute(&f)?.willmore_energy();
    let directions = low_discrepancy_directions_from(config.seed, p.direction_count);
    let t_grid = uniform_t_grid(p.t_steps);
    let table = sweep(&f, &p.radii, &directions, &t_grid, SweepOptions { max_grid: p.max_grid });

    out.write("sweep.csv", &table.to_csv())?;
    out.write("sections.csv", &sections_csv(&table, p.section_direction))?;
    let heat = heatmap_rows(&table);
    let mut heat_csv = Csv::new(&["radius", "t", "maxArea"]);
    for (ri, row) in heat.iter().enumerate() {
        for (ti, v) in row.iter().enumerate() {
            heat_csv.row(&[num(table.radii[ri]), num(table.t_grid[ti]), opt(*v)]);
        }
    }
    out.write("heatmap.csv", &heat_csv.finish())?;
    out.write(
        "heatmap.svg",
        &svg::heatmap(
            &format!("max proxy area over directions, {}", spec.name),
            "t",
            "|v|",
            &table.t_grid,
            &table.radii,
            &heat,
        ),
    )?;

    let max_area = table.max_area();
    out.write_json(
        "sweep-summary.json",
        &SweepSummary {
            surface: &spec.name,
            willmore,
            radii: &table.radii,
            directions: &table.directions,
            t_steps: p.t_steps,
            cells: table.cells.len(),
            argmax: table.argmax,
            max_area,
            five_pi_radius: FIVE_PI_RADIUS,
            proxy_exceedances: table.exceedances().collect(),
            masked_cells: &table.failures,
        },
    )?;

    let mut checks = vec![Check::at_most(
        "maxAreaMinusWillmore",
        max_area.map_or(f64::NAN, |a| a - willmore),
        WILLMORE_SLACK,
    )];
    if p.radii.contains(&0.0) {
        checks.push(Check::at_least(
            "maxAreaMinusTwoPiSq",
            max_area.map_or(f64::NAN, |a| a - TWO_PI_SQ),
            -WILLMORE_SLACK,
        ));
    }
    if spec.is_clifford() && p.radii.contains(&0.0) {
        let best = table.argmax;
        checks.push(Check::at_most(
            "argmaxDistanceFromOrigin",
            best.map_or(f64::NAN, |b| b.radius.abs() + b.t.abs()),
            0.0,
        ));
        checks.push(Check::at_most(
            "argmaxValueError",
            best.map_or(f64::NAN, |b| (b.area - TWO_PI_SQ).abs()),
            ARGMAX_TOL,
        ));
    }
    Ok(checks)
}

fn sections_csv(table: &SweepTable, direction: usize) -> String {
    let mut csv = Csv::new(&["radius", "t", "area"]);
    for c in table.cells.iter().filter(|c| c.dir_index == direction) {
        csv.row(&[num(c.radius), num(c.t), opt(c.area)]);
    }
    csv.finish()
}

/// `rows[radius][t]` = largest area over directions, `None` when every cell is masked.
fn heatmap_rows(table: &SweepTable) -> Vec<Vec<Option<f64>>> {
    let (nr, nd, nt) = (table.radii.len(), table.directions.len(), table.t_grid.len());
    (0..nr)
        .map(|ri| {
            (0..nt)
                .map(|ti| {
                    (0..nd)
                        .filter_map(|di| {
                            let c = &table.cells[(ri * nd + di) * nt + ti];
                            match c.status {
                                CellStatus::Failed(_) => None,
                                _ => c.area,
                            }
                        })
                        .reduce(f64::max)
                })
                .collect()
        })
        .collect()
}
