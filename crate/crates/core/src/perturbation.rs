use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::geometry::SurfaceGeometry;
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4};

/// Direction a perturbation mode pushes along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "component")]
pub enum Component {
    /// Unit normal of the base surface inside `T S^3`.
    Normal,
    /// `df / dtheta` of the base (not normalized).
    TangentTheta,
    /// `df / dphi` of the base (not normalized).
    TangentPhi,
    /// Fixed coordinate axis `e_axis` of `R^4`.
    Ambient { axis: usize },
}

/// One trigonometric mode `amplitude * cos(m theta + n phi + phase)` along a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    #[serde(flatten)]
    pub component: Component,
    pub m: i64,
    pub n: i64,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Mode {
    pub fn normal(m: i64, n: i64, amplitude: f64) -> Self {
        Self {
            component: Component::Normal,
            m,
            n,
            amplitude,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    #[inline]
    pub fn profile(&self, theta: f64, phi: f64) -> f64 {
        self.amplitude * (self.m as f64 * theta + self.n as f64 * phi + self.phase).cos()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerturbationSpec {
    pub modes: Vec<Mode>,
}

impl PerturbationSpec {
    pub fn new(modes: Vec<Mode>) -> Self {
        Self { modes }
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Every mode must sit strictly below Nyquist and name a valid axis.
    pub fn validate(&self, grid: TorusGrid) -> Result<()> {
        for mode in &self.modes {
            if !grid.resolves(mode.m, mode.n) {
                return Err(GeometryError::UnresolvedMode {
                    m: mode.m,
                    n: mode.n,
                    n_theta: grid.n_theta(),
                    n_phi: grid.n_phi(),
                });
            }
            if let Component::Ambient { axis } = mode.component {
                if axis > 3 {
                    return Err(GeometryError::Format(format!(
                        "ambient axis {axis} out of range 0..=3"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl Immersion {
    /// Adds the modes to the base and projects radially back onto the sphere.
    pub fn perturb(&self, spec: &PerturbationSpec) -> Result<Immersion> {
        let grid = self.grid();
        spec.validate(grid)?;
        if spec.is_empty() {
            return Ok(self.clone());
        }
        let needs_normal = spec.modes.iter().any(|m| m.component == Component::Normal);
        let normals = if needs_normal {
            Some(SurfaceGeometry::compute(self)?.normal)
        } else {
            None
        };
        self.map_points(|k, p| {
            let (t, ph) = grid.angles(k);
            let mut out = *p;
            for mode in &spec.modes {
                let dir = match mode.component {
                    Component::Normal => normals.as_ref().expect("computed above")[k],
                    Component::TangentTheta => self.d_theta()[k],
                    Component::TangentPhi => self.d_phi()[k],
                    Component::Ambient { axis } => {
                        let mut e = Point4::zeros();
                        e[axis] = 1.0;
                        e
                    }
                };
                out += dir * mode.profile(t, ph);
            }
            Ok(out)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_spec_is_identity() {
        let g = TorusGrid::square(8).unwrap();
        let f = Immersion::clifford(g);
        let same = f.perturb(&PerturbationSpec::default()).unwrap();
        assert_eq!(same.points(), f.points());
    }

    #[test]
    fn constant_normal_mode_gives_product_torus() {
        let g = TorusGrid::square(16).unwrap();
        let eps = 0.05;
        let f = Immersion::clifford(g)
            .perturb(&PerturbationSpec::new(vec![Mode::normal(0, 0, eps)]))
            .unwrap();
        // (f0 + eps n) / |.| = ((1 - eps) phi, (1 + eps) psi) / sqrt(1 + eps^2)
        let norm = (1.0 + eps * eps).sqrt() * std::f64::consts::SQRT_2;
        let (r, s) = ((1.0 - eps) / norm, (1.0 + eps) / norm);
        let area = SurfaceGeometry::compute(&f).unwrap().area();
        assert!((area - 4.0 * PI * PI * r * s).abs() < 1e-12);
    }

    #[test]
    fn unresolved_mode_is_rejected() {
        let g = TorusGrid::square(8).unwrap();
        let spec = PerturbationSpec::new(vec![Mode::normal(4, 0, 0.01)]);
        assert!(matches!(
            Immersion::clifford(g).perturb(&spec),
            Err(GeometryError::UnresolvedMode { m: 4, .. })
        ));
    }

    #[test]
    fn huge_amplitude_degenerates() {
        let g = TorusGrid::square(16).unwrap();
        // f0 + n = (0, 0, cos phi, sin phi) * sqrt 2 collapses the theta circle.
        let spec = PerturbationSpec::new(vec![Mode::normal(0, 0, 1.0)]);
        assert!(matches!(
            Immersion::clifford(g).perturb(&spec),
            Err(GeometryError::DegenerateImmersion { .. })
        ));
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"[{"component":"normal","m":2,"n":0,"amplitude":0.01},
                       {"component":"ambient","axis":3,"m":1,"n":1,"amplitude":0.02,"phase":0.5}]"#;
        let spec: PerturbationSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.modes[0], Mode::normal(2, 0, 0.01));
        assert_eq!(spec.modes[1].component, Component::Ambient { axis: 3 });
    }
}
