//! A fixed set of genus-one test surfaces near the Clifford torus.

use crate::error::Result;
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4};
use crate::moebius::ConformalCenter;
use crate::perturbation::{Component, Mode, PerturbationSpec};

#[derive(Debug, Clone)]
pub struct NamedSurface {
    pub name: &'static str,
    pub immersion: Immersion,
}

fn mode(component: Component, m: i64, n: i64, amplitude: f64, phase: f64) -> Mode {
    Mode {
        component,
        m,
        n,
        amplitude,
        phase,
    }
}

/// Perturbation specs of the corpus, by name. All modes have `|m|, |n| <= 3`.
pub fn corpus_specs() -> Vec<(&'static str, PerturbationSpec)> {
    vec![
        ("clifford", PerturbationSpec::default()),
        ("normal-2-0", PerturbationSpec::new(vec![Mode::normal(2, 0, 0.01)])),
        (
            "normal-mixed",
            PerturbationSpec::new(vec![
                Mode::normal(1, 2, 0.03),
                Mode::normal(3, -1, 0.015).with_phase(0.4),
            ]),
        ),
        (
            "tangent-theta",
            PerturbationSpec::new(vec![mode(Component::TangentTheta, 0, 1, 0.05, 0.0)]),
        ),
        (
            "ambient-axis-3",
            PerturbationSpec::new(vec![mode(Component::Ambient { axis: 3 }, 2, 1, 0.04, 1.1)]),
        ),
        (
            "normal-large",
            PerturbationSpec::new(vec![
                Mode::normal(0, 0, 0.1),
                Mode::normal(2, 2, 0.05).with_phase(-0.7),
                mode(Component::TangentPhi, 1, -1, 0.03, 0.2),
            ]),
        ),
    ]
}

/// The corpus on `grid`, plus one conformal image of the Clifford torus.
pub fn corpus(grid: TorusGrid) -> Result<Vec<NamedSurface>> {
    let base = Immersion::clifford(grid);
    let mut out = Vec::new();
    for (name, spec) in corpus_specs() {
        out.push(NamedSurface {
            name,
            immersion: base.perturb(&spec)?,
        });
    }
    let center = ConformalCenter::new(Point4::new(0.2, -0.1, 0.15, 0.1))?;
    out.push(NamedSurface {
        name: "moebius-clifford",
        immersion: center.transform(&base)?,
    });
    Ok(out)
}
