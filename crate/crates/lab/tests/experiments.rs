use std::fs;
use std::path::Path;

use tempfile::TempDir;
use willmore_lab::experiments::invariance::centers;
use willmore_lab::{run_experiment, ExperimentConfig, ExperimentKind, Outcome};

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind);
    match kind {
        ExperimentKind::Invariance => {
            c.grid = Some([16, 16]);
            c.invariance.radii = vec![0.3, 0.6];
            c.invariance.directions_per_radius = 1;
        }
        ExperimentKind::CanonicalSweep => {
            c.grid = Some([16, 16]);
            c.sweep.radii = vec![0.0, 0.5, 0.95];
            c.sweep.direction_count = 3;
            c.sweep.t_steps = 8;
        }
        ExperimentKind::Boundary => {
            c.grid = Some([16, 16]);
            c.boundary.area_grid = 256;
            c.boundary.cloud_size = 24;
            c.boundary.sphere_samples = 200;
            c.boundary.radii = vec![0.0, 0.5];
        }
        ExperimentKind::StabilityScaling => {
            c.grid = Some([32, 32]);
            c.stability.epsilons = vec![0.0, 0.005, 0.01];
        }
        ExperimentKind::Identities => {
            c.grid = Some([32, 32]);
        }
    }
    c
}

fn run(config: &ExperimentConfig, dir: &Path) -> Outcome {
    run_experiment(config, dir).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn every_experiment_is_byte_deterministic() {
    for kind in ExperimentKind::ALL {
        let config = small(kind);
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        let first = run(&config, a.path());
        let second = run(&config, b.path());
        assert_eq!(first.files, second.files);
        assert!(first.files.contains(&"checks.json".to_string()));
        for f in &first.files {
            assert_eq!(
                fs::read(a.path().join(f)).unwrap(),
                fs::read(b.path().join(f)).unwrap(),
                "{} {f}",
                kind.name()
            );
        }
    }
}

#[test]
fn headers_name_the_columns() {
    let expect = [
        (ExperimentKind::Invariance, "invariance.csv", "surface,v0,v1,v2,v3,radius,W,tracefreeEnergy,wDrift,tracefreeDrift,status"),
        (ExperimentKind::CanonicalSweep, "sweep.csv", "radius,dirIndex,t,area,status"),
        (ExperimentKind::CanonicalSweep, "sections.csv", "radius,t,area"),
        (ExperimentKind::Boundary, "boundary.csv", "radius,poleOnSurface,area,sphereFitResidual,hausdorff,status"),
        (ExperimentKind::StabilityScaling, "stability.csv", "epsilon,delta,distW22,hL2,uInf,moduliGap,areaGap"),
        (ExperimentKind::Identities, "identities.csv", "surface,identity,residual,threshold,pass"),
    ];
    for (kind, file, header) in expect {
        let dir = TempDir::new().unwrap();
        run(&small(kind), dir.path());
        assert!(read(dir.path(), file).starts_with(header), "{file}");
    }
}

#[test]
fn invariance_identity_row_has_zero_drift() {
    let dir = TempDir::new().unwrap();
    let outcome = run(&small(ExperimentKind::Invariance), dir.path());
    assert!(outcome.passed(), "{:?}", outcome.failures());
    let csv = read(dir.path(), "invariance.csv");
    let identity: Vec<&str> = csv.lines().filter(|l| l.contains(",0.0,0.0,0.0,0.0,0.0,")).collect();
    assert_eq!(identity.len(), 4);
    assert!(identity.iter().all(|l| l.ends_with(",0.0,0.0,ok")), "{identity:?}");
}

#[test]
fn seed_changes_random_centers_only_through_seed() {
    let mut config = small(ExperimentKind::Invariance);
    let first = centers(&config);
    assert_eq!(first, centers(&config));
    config.seed = 1;
    let second = centers(&config);
    assert_eq!(first[0], second[0]);
    assert_ne!(first[1], second[1]);
    assert!(second.iter().skip(1).all(|v| (v.norm() - 0.3).abs() < 1e-12 || (v.norm() - 0.6).abs() < 1e-12));
}

#[test]
fn sweep_writes_heatmap_and_summary() {
    let dir = TempDir::new().unwrap();
    let outcome = run(&small(ExperimentKind::CanonicalSweep), dir.path());
    assert!(outcome.passed(), "{:?}", outcome.failures());
    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "sweep-summary.json")).unwrap();
    assert_eq!(summary["cells"], 3 * 3 * 8);
    assert_eq!(summary["argmax"]["radius"], 0.0);
    assert_eq!(read(dir.path(), "sweep.csv").lines().count(), 1 + 3 * 3 * 8);
    assert_eq!(read(dir.path(), "sections.csv").lines().count(), 1 + 3 * 8);
    assert_eq!(read(dir.path(), "heatmap.csv").lines().count(), 1 + 3 * 8);
    let svg = read(dir.path(), "heatmap.svg");
    assert!(svg.starts_with("<svg") && svg.matches("<rect").count() >= 3 * 8);
}

#[test]
fn perturbed_sweep_skips_clifford_only_checks() {
    let mut config = small(ExperimentKind::CanonicalSweep);
    config.surfaces = vec![serde_json::from_str(
        r#"{"name": "bumpy", "modes": [{"component": "normal", "m": 2, "n": 1, "amplitude": 0.05}]}"#,
    )
    .unwrap()];
    let dir = TempDir::new().unwrap();
    let outcome = run(&config, dir.path());
    assert!(outcome.check("argmaxDistanceFromOrigin").is_none());
    assert!(outcome.check("maxAreaMinusWillmore").unwrap().pass);
    assert!(outcome.check("maxAreaMinusTwoPiSq").unwrap().pass);
}

#[test]
fn boundary_identity_row_is_clifford_area() {
    let dir = TempDir::new().unwrap();
    let outcome = run(&small(ExperimentKind::Boundary), dir.path());
    assert!(outcome.check("identityAreaError").unwrap().pass);
    assert!(outcome.check("onPoleAreaRelativeToFourPi").is_none());
    assert_eq!(read(dir.path(), "boundary.csv").lines().count(), 1 + 4);
}

#[test]
fn stability_zero_row_and_fits() {
    let dir = TempDir::new().unwrap();
    let outcome = run(&small(ExperimentKind::StabilityScaling), dir.path());
    assert!(outcome.check("zeroRowMax").unwrap().pass);
    assert!(outcome.check("slopeDistW22").unwrap().pass);
    assert!(outcome.check("slopeHL2").unwrap().pass);
    let fits: serde_json::Value = serde_json::from_str(&read(dir.path(), "fits.json")).unwrap();
    assert_eq!(fits["fits"].as_array().unwrap().len(), 5);
    assert!(read(dir.path(), "scaling.svg").contains("distW22 (slope"));
}

#[test]
fn identities_cover_corpus() {
    let dir = TempDir::new().unwrap();
    let outcome = run(&small(ExperimentKind::Identities), dir.path());
    assert!(outcome.passed(), "{:?}", outcome.failures());
    assert_eq!(outcome.checks.len(), 7 * 4);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ExperimentConfig::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 5);
}
