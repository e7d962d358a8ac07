//! Scaling of the rigidity quantities along a one-mode family.

use rayon::prelude::*;
use serde::Serialize;
use willmore_core::stability::{stability_report, StabilityReport};
use willmore_core::{Mode, PerturbationSpec};

use crate::config::ExperimentConfig;
use crate::fit::{power_fit, PowerFit};
use crate::output::{num, Check, Csv, OutputDir};
use crate::svg::{self, Series};

/// Every quantity of the `epsilon = 0` row must be below this.
pub const ZERO_ROW_TOL: f64 = 1e-10;

/// Quantities fitted against `delta`, by column name.
pub const FITTED: [&str; 5] = ["distW22", "hL2", "uInf", "moduliGap", "uInfIsothermal"];

fn quantity(r: &StabilityReport, name: &str) -> f64 {
    match name {
        "distW22" => r.dist_w22,
        "hL2" => r.h_l2,
        "uInf" => r.u_inf,
        "moduliGap" => r.moduli_gap,
        "uInfIsothermal" => r.u_inf_isothermal,
        _ => unreachable!("unknown quantity {name}"),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedFit {
    pub quantity: &'static str,
    pub fit: Option<PowerFit>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityFits {
    pub mode: Mode,
    pub epsilons: Vec<f64>,
    pub fits: Vec<NamedFit>,
    pub ratio_w22_h: Vec<f64>,
    /// `max / min - 1` of the ratio over the positive epsilons.
    pub ratio_spread: f64,
}

pub fn run(config: &ExperimentConfig, out: &mut OutputDir) -> anyhow::Result<Vec<Check>> {
    let p = &config.stability;
    let base = config.surface_list().remove(0).build(config.torus_grid())?;
    let reports: Vec<StabilityReport> = p
        .epsilons
        .par_iter()
        .map(|&eps| {
            let mode = Mode { amplitude: eps, ..p.mode };
            let f = base.perturb(&PerturbationSpec::new(vec![mode]))?;
            stability_report(&f)
        })
        .collect::<willmore_core::Result<_>>()?;

    let mut csv = Csv::new(&[
        "epsilon",
        "delta",
        "distW22",
        "hL2",
        "uInf",
        "moduliGap",
        "areaGap",
        "distW12",
        "hL1",
        "uInfIsothermal",
        "conformalDefect",
        "maxBalanceResidual",
    ]);
    for (eps, r) in p.epsilons.iter().zip(&reports) {
        csv.row(&[
            num(*eps),
            num(r.delta),
            num(r.dist_w22),
            num(r.h_l2),
            num(r.u_inf),
            num(r.moduli_gap),
            num(r.area_gap),
            num(r.dist_w12),
            num(r.h_l1),
            num(r.u_inf_isothermal),
            num(r.conformal_defect),
            num(r.max_balance_residual),
        ]);
    }
    out.write("stability.csv", &csv.finish())?;
    out.write_json("reports.json", &reports)?;

    let positive: Vec<&StabilityReport> = p
        .epsilons
        .iter()
        .zip(&reports)
        .filter(|(e, _)| **e > 0.0)
        .map(|(_, r)| r)
        .collect();
    let fits: Vec<NamedFit> = FITTED
        .iter()
        .map(|&q| NamedFit {
            quantity: q,
            fit: power_fit(&positive.iter().map(|r| (r.delta, quantity(r, q))).collect::<Vec<_>>()),
        })
        .collect();
    let ratios: Vec<f64> = positive.iter().map(|r| r.dist_w22 / r.h_l2).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi / lo - 1.0;
    let summary = StabilityFits {
        mode: p.mode,
        epsilons: p.epsilons.clone(),
        fits,
        ratio_w22_h: ratios,
        ratio_spread: spread,
    };
    out.write_json("fits.json", &summary)?;

    let series: Vec<Series> = summary
        .fits
        .iter()
        .filter(|f| f.quantity != "uInfIsothermal")
        .map(|f| Series {
            name: f.quantity,
            points: positive.iter().map(|r| (r.delta, quantity(r, f.quantity))).collect(),
            fit: f.fit.map(|fit| (fit.slope, fit.constant)),
        })
        .collect();
    out.write("scaling.svg", &svg::loglog_scatter("rigidity quantities against delta", "delta", "value", &series))?;

    let slope = |q: &str| {
        summary
            .fits
            .iter()
            .find(|f| f.quantity == q)
            .and_then(|f| f.fit)
            .map_or(f64::NAN, |f| f.slope)
    };
    let [lo_s, hi_s] = p.slope_range;
    let mut checks = vec![
        Check::between("slopeDistW22", slope("distW22"), Some(lo_s), Some(hi_s)),
        Check::between("slopeHL2", slope("hL2"), Some(lo_s), Some(hi_s)),
        Check::at_most("ratioSpreadW22OverHL2", spread, p.max_ratio_spread),
    ];
    for (eps, r) in p.epsilons.iter().zip(&reports) {
        if *eps == 0.0 {
            let worst = [
                r.delta,
                r.dist_w22,
                r.dist_w12,
                r.h_l2,
                r.h_l1,
                r.u_inf,
                r.moduli_gap,
                r.area_gap,
            ]
            .into_iter()
            .fold(0.0f64, |a, b| a.max(b.abs()));
            checks.push(Check::at_most("zeroRowMax", worst, ZERO_ROW_TOL));
        }
    }
    Ok(checks)
}
