//! Experiment configuration: parsing, defaults and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use willmore_core::{ConformalCenter, Immersion, Mode, PerturbationSpec, Point4, TorusGrid};

/// Largest conformal center norm accepted anywhere in a config.
pub const MAX_CONFIG_CENTER_NORM: f64 = 0.995;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{field} (line {line}, column {column}): {message}")]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { field, .. } | Self::Invalid { field, .. } => Some(field),
        }
    }

    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            Self::Parse { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Invariance,
    CanonicalSweep,
    Boundary,
    StabilityScaling,
    Identities,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        Self::Invariance,
        Self::CanonicalSweep,
        Self::Boundary,
        Self::StabilityScaling,
        Self::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Invariance => "invariance",
            Self::CanonicalSweep => "canonical-sweep",
            Self::Boundary => "boundary",
            Self::StabilityScaling => "stability-scaling",
            Self::Identities => "identities",
        }
    }

    /// Base grid used when the config does not name one.
    pub fn default_grid(self) -> [usize; 2] {
        match self {
            Self::Invariance => [32, 32],
            Self::StabilityScaling => [128, 128],
            _ => [64, 64],
        }
    }
}

/// A surface: the Clifford torus, optionally perturbed, optionally pushed by `F_v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SurfaceSpec {
    pub name: String,
    #[serde(default)]
    pub modes: Vec<Mode>,
    #[serde(default)]
    pub conformal_push: Option<[f64; 4]>,
}

impl SurfaceSpec {
    pub fn clifford() -> Self {
        Self {
            name: "clifford".into(),
            modes: Vec::new(),
            conformal_push: None,
        }
    }

    pub fn is_clifford(&self) -> bool {
        self.modes.iter().all(|m| m.amplitude == 0.0)
            && self.conformal_push.is_none_or(|v| v == [0.0; 4])
    }

    pub fn build(&self, grid: TorusGrid) -> willmore_core::Result<Immersion> {
        let f = Immersion::clifford(grid).perturb(&PerturbationSpec::new(self.modes.clone()))?;
        match self.conformal_push {
            Some(v) => ConformalCenter::new(Point4::from(v))?.transform(&f),
            None => Ok(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct SweepParams {
    pub radii: Vec<f64>,
    pub direction_count: usize,
    pub t_steps: usize,
    /// Cap on the per-center refined grid.
    pub max_grid: usize,
    /// Direction index whose `(t, area)` sections are written out.
    pub section_direction: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            radii: vec![0.0, 0.3, 0.6, 0.9, 0.95, 0.99],
            direction_count: 12,
            t_steps: 64,
            max_grid: 512,
            section_direction: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct InvarianceParams {
    pub radii: Vec<f64>,
    /// Random unit directions drawn per radius.
    pub directions_per_radius: usize,
    /// Explicit centers evaluated in addition to the random ones.
    pub centers: Vec<[f64; 4]>,
    pub max_grid: usize,
    pub tolerance: f64,
}

impl Default for InvarianceParams {
    fn default() -> Self {
        Self {
            radii: vec![0.3, 0.6, 0.9],
            directions_per_radius: 3,
            centers: Vec::new(),
            max_grid: 512,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct BoundaryParams {
    pub radii: Vec<f64>,
    /// Parameter point `(theta, phi)` whose image is the on-surface pole.
    pub focus: [f64; 2],
    /// Pole direction that misses the surface.
    pub off_pole: [f64; 4],
    /// Grid on which image areas are integrated.
    pub area_grid: usize,
    /// Side of the warped tensor cloud used for the sphere fit.
    pub cloud_size: usize,
    /// Points sampled on the fitted sphere for the Hausdorff distance.
    pub sphere_samples: usize,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        Self {
            radii: vec![0.0, 0.9, 0.95, 0.99],
            focus: [0.3, 0.7],
            off_pole: [0.0, 0.0, 0.0, 1.0],
            area_grid: 1024,
            cloud_size: 96,
            sphere_samples: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct StabilityParams {
    pub epsilons: Vec<f64>,
    /// Shape of the family direction; its amplitude is replaced by each epsilon.
    pub mode: Mode,
    pub slope_range: [f64; 2],
    pub max_ratio_spread: f64,
}

impl Default for StabilityParams {
    fn default() -> Self {
        Self {
            epsilons: vec![0.0, 0.002, 0.005, 0.01, 0.015, 0.02],
            mode: Mode::normal(2, 0, 1.0),
            slope_range: [0.85, 1.15],
            max_ratio_spread: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct IdentityParams {
    pub monotonicity_radius: f64,
    pub monotonicity_samples: usize,
}

impl Default for IdentityParams {
    fn default() -> Self {
        Self {
            monotonicity_radius: 0.5,
            monotonicity_samples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub grid: Option<[usize; 2]>,
    /// Empty means the experiment's default surface set.
    #[serde(default)]
    pub surfaces: Vec<SurfaceSpec>,
    #[serde(default)]
    pub sweep: SweepParams,
    #[serde(default)]
    pub invariance: InvarianceParams,
    #[serde(default)]
    pub boundary: BoundaryParams,
    #[serde(default)]
    pub stability: StabilityParams,
    #[serde(default)]
    pub identities: IdentityParams,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            grid: None,
            surfaces: Vec::new(),
            sweep: SweepParams::default(),
            invariance: InvarianceParams::default(),
            boundary: BoundaryParams::default(),
            stability: StabilityParams::default(),
            identities: IdentityParams::default(),
            output_dir: None,
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::Parse {
                field,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn grid_size(&self) -> [usize; 2] {
        self.grid.unwrap_or_else(|| self.experiment.default_grid())
    }

    pub fn torus_grid(&self) -> TorusGrid {
        let [n, m] = self.grid_size();
        TorusGrid::new(n, m).expect("validated grid")
    }

    /// Surfaces the experiment runs on, falling back to its default set.
    pub fn surface_list(&self) -> Vec<SurfaceSpec> {
        if !self.surfaces.is_empty() {
            return self.surfaces.clone();
        }
        match self.experiment {
            ExperimentKind::Invariance => default_invariance_surfaces(),
            ExperimentKind::Identities => default_identity_surfaces(),
            _ => vec![SurfaceSpec::clifford()],
        }
    }

    /// Checks every grid, center and mode before any computation starts.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let [n, m] = self.grid_size();
        check_grid("grid", n)?;
        check_grid("grid", m)?;
        let grid = TorusGrid::new(n, m).map_err(|e| ConfigError::invalid("grid", e.to_string()))?;

        let single = matches!(
            self.experiment,
            ExperimentKind::CanonicalSweep | ExperimentKind::Boundary | ExperimentKind::StabilityScaling
        );
        if single && self.surfaces.len() > 1 {
            return Err(ConfigError::invalid(
                "surfaces",
                format!("{} runs on exactly one surface", self.experiment.name()),
            ));
        }
        for (k, s) in self.surfaces.iter().enumerate() {
            let field = format!("surfaces[{k}]");
            if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                return Err(ConfigError::invalid(
                    format!("{field}.name"),
                    "names use ASCII letters, digits, '-' and '_'",
                ));
            }
            check_modes(&format!("{field}.modes"), &s.modes, grid)?;
            if let Some(v) = s.conformal_push {
                check_center(&format!("{field}.conformalPush"), v)?;
            }
        }
        for (i, a) in self.surfaces.iter().enumerate() {
            if self.surfaces[..i].iter().any(|b| b.name == a.name) {
                return Err(ConfigError::invalid(format!("surfaces[{i}].name"), "duplicate name"));
            }
        }

        match self.experiment {
            ExperimentKind::Invariance => {
                let p = &self.invariance;
                check_radii("invariance.radii", &p.radii)?;
                check_grid("invariance.maxGrid", p.max_grid)?;
                for (k, v) in p.centers.iter().enumerate() {
                    check_center(&format!("invariance.centers[{k}]"), *v)?;
                }
                check_positive("invariance.tolerance", p.tolerance)?;
            }
            ExperimentKind::CanonicalSweep => {
                let p = &self.sweep;
                check_radii("sweep.radii", &p.radii)?;
                if p.direction_count == 0 {
                    return Err(ConfigError::invalid("sweep.directionCount", "must be positive"));
                }
                if p.t_steps < 2 || !p.t_steps.is_multiple_of(2) {
                    return Err(ConfigError::invalid(
                        "sweep.tSteps",
                        "must be even and at least 2 so that t = 0 is sampled",
                    ));
                }
                check_grid("sweep.maxGrid", p.max_grid)?;
                if p.section_direction >= p.direction_count {
                    return Err(ConfigError::invalid(
                        "sweep.sectionDirection",
                        "must index one of the sweep directions",
                    ));
                }
            }
            ExperimentKind::Boundary => {
                let p = &self.boundary;
                check_radii("boundary.radii", &p.radii)?;
                check_grid("boundary.areaGrid", p.area_grid)?;
                let dir = Point4::from(p.off_pole);
                if !(dir.norm() > 0.0) || !dir.iter().all(|x| x.is_finite()) {
                    return Err(ConfigError::invalid("boundary.offPole", "must be a nonzero finite vector"));
                }
                if p.cloud_size < 8 {
                    return Err(ConfigError::invalid("boundary.cloudSize", "must be at least 8"));
                }
                if p.sphere_samples < 16 {
                    return Err(ConfigError::invalid("boundary.sphereSamples", "must be at least 16"));
                }
            }
            ExperimentKind::StabilityScaling => {
                let p = &self.stability;
                if p.epsilons.iter().any(|e| !e.is_finite() || *e < 0.0) {
                    return Err(ConfigError::invalid("stability.epsilons", "must be finite and non-negative"));
                }
                if p.epsilons.iter().filter(|e| **e > 0.0).count() < 2 {
                    return Err(ConfigError::invalid(
                        "stability.epsilons",
                        "need at least two positive values to fit slopes",
                    ));
                }
                check_modes("stability.mode", &[p.mode], grid)?;
                if !(p.slope_range[0] <= p.slope_range[1]) {
                    return Err(ConfigError::invalid("stability.slopeRange", "lower end exceeds upper end"));
                }
                check_positive("stability.maxRatioSpread", p.max_ratio_spread)?;
            }
            ExperimentKind::Identities => {
                let p = &self.identities;
                if !(0.0..=MAX_CONFIG_CENTER_NORM).contains(&p.monotonicity_radius) {
                    return Err(ConfigError::invalid(
                        "identities.monotonicityRadius",
                        format!("must lie in [0, {MAX_CONFIG_CENTER_NORM}]"),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn check_grid(field: &str, n: usize) -> Result<(), ConfigError> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(ConfigError::invalid(field, format!("grid size {n} must be even and at least 8")));
    }
    Ok(())
}

fn check_positive(field: &str, x: f64) -> Result<(), ConfigError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ConfigError::invalid(field, "must be positive"));
    }
    Ok(())
}

fn check_radii(field: &str, radii: &[f64]) -> Result<(), ConfigError> {
    if radii.is_empty() {
        return Err(ConfigError::invalid(field, "must not be empty"));
    }
    for (k, r) in radii.iter().enumerate() {
        if !(0.0..=MAX_CONFIG_CENTER_NORM).contains(r) {
            return Err(ConfigError::invalid(
                format!("{field}[{k}]"),
                format!("radius {r} outside [0, {MAX_CONFIG_CENTER_NORM}]"),
            ));
        }
    }
    Ok(())
}

fn check_center(field: &str, v: [f64; 4]) -> Result<(), ConfigError> {
    let norm = Point4::from(v).norm();
    if !(norm <= MAX_CONFIG_CENTER_NORM) {
        return Err(ConfigError::invalid(
            field,
            format!("|v| = {norm} exceeds {MAX_CONFIG_CENTER_NORM}"),
        ));
    }
    Ok(())
}

fn check_modes(field: &str, modes: &[Mode], grid: TorusGrid) -> Result<(), ConfigError> {
    PerturbationSpec::new(modes.to_vec())
        .validate(grid)
        .map_err(|e| ConfigError::invalid(field, e.to_string()))?;
    if modes.iter().any(|m| !m.amplitude.is_finite() || !m.phase.is_finite()) {
        return Err(ConfigError::invalid(field, "amplitudes and phases must be finite"));
    }
    Ok(())
}

fn default_invariance_surfaces() -> Vec<SurfaceSpec> {
    let named = |name: &str, modes: Vec<Mode>| SurfaceSpec {
        name: name.into(),
        modes,
        conformal_push: None,
    };
    vec![
        SurfaceSpec::clifford(),
        named("normal-2-1", vec![Mode::normal(2, 1, 0.05)]),
        named(
            "normal-mixed",
            vec![Mode::normal(1, 2, 0.03), Mode::normal(3, -1, 0.015).with_phase(0.4)],
        ),
        named("normal-radial", vec![Mode::normal(0, 0, 0.05), Mode::normal(1, -1, 0.02)]),
    ]
}

fn default_identity_surfaces() -> Vec<SurfaceSpec> {
    let mut out: Vec<SurfaceSpec> = willmore_core::corpus::corpus_specs()
        .into_iter()
        .map(|(name, spec)| SurfaceSpec {
            name: name.into(),
            modes: spec.modes,
            conformal_push: None,
        })
        .collect();
    out.push(SurfaceSpec {
        name: "moebius-clifford".into(),
        modes: Vec::new(),
        conformal_push: Some([0.2, -0.1, 0.15, 0.1]),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "canonical-sweep"}"#).unwrap();
        assert_eq!(c.grid_size(), [64, 64]);
        assert_eq!(c.sweep.radii.len(), 6);
        assert_eq!(c.sweep.direction_count, 12);
        assert_eq!(c.sweep.t_steps, 64);
        assert_eq!(c.surface_list(), vec![SurfaceSpec::clifford()]);
    }

    #[test]
    fn parse_errors_carry_line_and_field() {
        let text = "{\n  \"experiment\": \"boundary\",\n  \"boundary\": {\n    \"radii\": [0.9, \"x\"]\n  }\n}";
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert_eq!(err.field(), Some("boundary.radii[1]"));
        assert_eq!(err.location().unwrap().0, 4);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "identities", "gird": [8, 8]}"#).unwrap_err();
        assert!(err.to_string().contains("gird"), "{err}");
    }

    #[test]
    fn validation_rejects_bad_input() {
        let cases = [
            (r#"{"experiment": "identities", "grid": [7, 8]}"#, "grid"),
            (r#"{"experiment": "identities", "grid": [6, 6]}"#, "grid"),
            (
                r#"{"experiment": "invariance", "invariance": {"radii": [0.3, 0.999]}}"#,
                "invariance.radii[1]",
            ),
            (
                r#"{"experiment": "identities", "surfaces": [{"name": "a", "conformalPush": [0.9, 0.5, 0, 0]}]}"#,
                "surfaces[0].conformalPush",
            ),
            (
                r#"{"experiment": "identities", "grid": [16, 16], "surfaces": [{"name": "a", "modes": [{"component": "normal", "m": 8, "n": 0, "amplitude": 0.01}]}]}"#,
                "surfaces[0].modes",
            ),
            (
                r#"{"experiment": "boundary", "surfaces": [{"name": "a"}, {"name": "b"}]}"#,
                "surfaces",
            ),
            (r#"{"experiment": "canonical-sweep", "sweep": {"tSteps": 15}}"#, "sweep.tSteps"),
            (
                r#"{"experiment": "stability-scaling", "stability": {"epsilons": [0, 0.01]}}"#,
                "stability.epsilons",
            ),
        ];
        for (text, field) in cases {
            let err = ExperimentConfig::from_json(text).unwrap_err();
            assert_eq!(err.field(), Some(field), "{text}: {err}");
        }
    }

    #[test]
    fn surfaces_build_with_modes_and_push() {
        let spec: SurfaceSpec = serde_json::from_str(
            r#"{"name": "s", "modes": [{"component": "ambient", "axis": 2, "m": 1, "n": 1, "amplitude": 0.02}], "conformalPush": [0.1, 0, 0, 0]}"#,
        )
        .unwrap();
        assert!(!spec.is_clifford());
        let f = spec.build(TorusGrid::square(16).unwrap()).unwrap();
        assert!(f.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut c = ExperimentConfig::new(ExperimentKind::StabilityScaling);
        c.seed = 7;
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
    }
}
