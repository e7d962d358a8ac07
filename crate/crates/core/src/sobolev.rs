//! Sobolev norms on the flat torus under the unit-normalized Fourier convention
//! `||h||_s^2 = 4 pi^2 sum_k (1 + |k|^2)^s |h_k|^2`.

use std::f64::consts::PI;

use crate::error::{GeometryError, Result};
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4};
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevOrder {
    /// Spectral dual of `W^{1,2}`.
    Dual,
    L2,
    H1,
    H2,
}

impl SobolevOrder {
    pub fn exponent(self) -> i32 {
        match self {
            SobolevOrder::Dual => -1,
            SobolevOrder::L2 => 0,
            SobolevOrder::H1 => 1,
            SobolevOrder::H2 => 2,
        }
    }
}

impl TryFrom<i32> for SobolevOrder {
    type Error = GeometryError;

    fn try_from(s: i32) -> Result<Self> {
        match s {
            -1 => Ok(SobolevOrder::Dual),
            0 => Ok(SobolevOrder::L2),
            1 => Ok(SobolevOrder::H1),
            2 => Ok(SobolevOrder::H2),
            other => Err(GeometryError::UnsupportedOrder(other)),
        }
    }
}

/// Anything that can be viewed as a list of scalar components on a grid.
pub trait GridField {
    fn grid(&self) -> TorusGrid;
    fn component_count(&self) -> usize;
    fn component(&self, c: usize) -> Vec<f64>;
}

/// A real scalar field sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: TorusGrid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: TorusGrid, f: F) -> Self {
        Self {
            grid,
            values: grid.sample(f),
        }
    }
}

impl GridField for ScalarField {
    fn grid(&self) -> TorusGrid {
        self.grid
    }
    fn component_count(&self) -> usize {
        1
    }
    fn component(&self, _c: usize) -> Vec<f64> {
        self.values.clone()
    }
}

/// An `R^4`-valued field sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: TorusGrid,
    pub values: Vec<Point4>,
}

impl VectorField {
    pub fn new(grid: TorusGrid, values: Vec<Point4>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self { grid, values })
    }

    /// `f - g` node-wise; both immersions must share a grid.
    pub fn difference(f: &Immersion, g: &Immersion) -> Result<Self> {
        if f.grid() != g.grid() {
            return Err(GeometryError::LengthMismatch {
                expected: f.grid().len(),
                found: g.grid().len(),
            });
        }
        let values = f.points().iter().zip(g.points()).map(|(a, b)| a - b).collect();
        Ok(Self {
            grid: f.grid(),
            values,
        })
    }
}

impl GridField for VectorField {
    fn grid(&self) -> TorusGrid {
        self.grid
    }
    fn component_count(&self) -> usize {
        4
    }
    fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|p| p[c]).collect()
    }
}

/// `(1 + |k|^2)^s` weighted spectral norm; components of vector fields add in squares.
pub fn sobolev_norm<F: GridField + ?Sized>(field: &F, order: SobolevOrder) -> f64 {
    let grid = field.grid();
    let sp = Spectral::new(grid);
    let s = order.exponent();
    let mut total = 0.0;
    for c in 0..field.component_count() {
        let coeffs = sp.forward(&field.component(c));
        let weighted = sp.multiply(&coeffs, |kt, kp| {
            (1.0 + (kt * kt + kp * kp) as f64).powi(s)
        });
        total += weighted
            .iter()
            .zip(&coeffs)
            .map(|(w, c)| (w * c.conj()).re)
            .sum::<f64>();
    }
    (4.0 * PI * PI * total).sqrt()
}

/// Integer-order entry point matching the `s in {-1, 0, 1, 2}` contract.
pub fn sobolev_norm_order<F: GridField + ?Sized>(field: &F, s: i32) -> Result<f64> {
    Ok(sobolev_norm(field, SobolevOrder::try_from(s)?))
}

/// `max |field|` over nodes (Euclidean length for vector fields).
pub fn sup_norm<F: GridField + ?Sized>(field: &F) -> f64 {
    let comps: Vec<Vec<f64>> = (0..field.component_count())
        .map(|c| field.component(c))
        .collect();
    (0..field.grid().len())
        .map(|k| comps.iter().map(|c| c[k] * c[k]).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_norms() {
        let g = TorusGrid::square(16).unwrap();
        let h = ScalarField::from_fn(g, |t, _| t.cos());
        let l2 = sobolev_norm(&h, SobolevOrder::L2);
        assert!((l2 - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
        let h2 = sobolev_norm(&h, SobolevOrder::H2);
        assert!((h2 - (8.0 * PI * PI).sqrt()).abs() < 1e-12);
        let dual = sobolev_norm(&h, SobolevOrder::Dual);
        assert!((dual - PI).abs() < 1e-12);
    }

    #[test]
    fn zero_field_and_bad_order() {
        let g = TorusGrid::square(8).unwrap();
        let z = ScalarField::from_fn(g, |_, _| 0.0);
        for s in [-1, 0, 1, 2] {
            assert_eq!(sobolev_norm_order(&z, s).unwrap(), 0.0);
        }
        assert_eq!(
            sobolev_norm_order(&z, 3),
            Err(GeometryError::UnsupportedOrder(3))
        );
        assert_eq!(sup_norm(&z), 0.0);
    }

    #[test]
    fn sup_norms() {
        let g = TorusGrid::square(8).unwrap();
        assert_eq!(sup_norm(&ScalarField::from_fn(g, |_, _| -3.5)), 3.5);
        assert!((sup_norm(&ScalarField::from_fn(g, |t, _| t.cos())) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vector_components_add_in_squares() {
        let g = TorusGrid::square(8).unwrap();
        let f = Immersion::clifford(g);
        let v = VectorField::new(g, f.points().to_vec()).unwrap();
        // |f0|^2 = 1 everywhere, so the L2 norm is sqrt(4 pi^2).
        assert!((sobolev_norm(&v, SobolevOrder::L2) - 2.0 * PI).abs() < 1e-12);
    }
}
