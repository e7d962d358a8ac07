//! Surface files: `{"nTheta": .., "nPhi": .., "points": [[x0, x1, x2, x3], ...]}`
//! with row-major node order and 17 significant digits per coordinate.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{GeometryError, Result};
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4};

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SurfaceFile {
    n_theta: usize,
    n_phi: usize,
    points: Vec<[f64; 4]>,
}

/// Serializes the sampled points of `f`.
pub fn surface_to_string(f: &Immersion) -> String {
    let grid = f.grid();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"nTheta\": {},", grid.n_theta());
    let _ = writeln!(out, "  \"nPhi\": {},", grid.n_phi());
    let _ = writeln!(out, "  \"points\": [");
    let last = f.points().len().saturating_sub(1);
    for (k, p) in f.points().iter().enumerate() {
        let _ = write!(
            out,
            "    [{:.16e}, {:.16e}, {:.16e}, {:.16e}]",
            p[0], p[1], p[2], p[3]
        );
        out.push_str(if k == last { "\n" } else { ",\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses a surface document and rebuilds the immersion (validated, no projection).
pub fn surface_from_str(text: &str) -> Result<Immersion> {
    let file: SurfaceFile =
        serde_json::from_str(text).map_err(|e| GeometryError::Format(e.to_string()))?;
    let grid = TorusGrid::new(file.n_theta, file.n_phi)?;
    let points = file.points.into_iter().map(Point4::from).collect();
    Immersion::from_points(grid, points)
}

pub fn write_surface(path: impl AsRef<Path>, f: &Immersion) -> std::io::Result<()> {
    std::fs::write(path, surface_to_string(f))
}

pub fn read_surface(path: impl AsRef<Path>) -> Result<Immersion> {
    let text = std::fs::read_to_string(path).map_err(|e| GeometryError::Format(e.to_string()))?;
    surface_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::{Mode, PerturbationSpec};

    #[test]
    fn round_trip_is_bit_exact() {
        let g = TorusGrid::new(8, 12).unwrap();
        let f = Immersion::clifford(g)
            .perturb(&PerturbationSpec::new(vec![Mode::normal(2, 1, 0.0123)]))
            .unwrap();
        let back = surface_from_str(&surface_to_string(&f)).unwrap();
        assert_eq!(back.grid(), g);
        assert_eq!(back.points(), f.points());
    }

    #[test]
    fn rejects_wrong_length_and_bad_grid() {
        let short = r#"{"nTheta": 8, "nPhi": 8, "points": [[1,0,0,0]]}"#;
        assert!(matches!(
            surface_from_str(short),
            Err(GeometryError::LengthMismatch { .. })
        ));
        let odd = r#"{"nTheta": 7, "nPhi": 8, "points": []}"#;
        assert!(matches!(
            surface_from_str(odd),
            Err(GeometryError::InvalidGrid { .. })
        ));
        assert!(matches!(surface_from_str("{"), Err(GeometryError::Format(_))));
    }
}
