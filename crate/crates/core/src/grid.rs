use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Uniform periodic lattice on the flat torus `[0, 2pi)^2`.
///
/// Node `(i, j)` sits at `theta = 2 pi i / n_theta`, `phi = 2 pi j / n_phi`
/// and is stored row-major at `i * n_phi + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    n_theta: usize,
    n_phi: usize,
}

impl TorusGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 8 || n_phi < 8 || !n_theta.is_multiple_of(2) || !n_phi.is_multiple_of(2) {
            return Err(GeometryError::InvalidGrid { n_theta, n_phi });
        }
        Ok(Self { n_theta, n_phi })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    #[inline]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[inline]
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i % self.n_theta) * self.n_phi + (j % self.n_phi)
    }

    /// Inverse of [`TorusGrid::index`].
    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.n_phi, idx % self.n_phi)
    }

    #[inline]
    pub fn theta(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n_theta as f64
    }

    #[inline]
    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// `(theta, phi)` of a flat node index.
    #[inline]
    pub fn angles(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.coords(idx);
        (self.theta(i), self.phi(j))
    }

    /// Quadrature weight `dtheta * dphi` of a single node.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        4.0 * PI * PI / self.len() as f64
    }

    /// Whether the Fourier mode `(m, n)` is strictly below Nyquist in both directions.
    pub fn resolves(&self, m: i64, n: i64) -> bool {
        (m.unsigned_abs() as usize) < self.n_theta / 2 && (n.unsigned_abs() as usize) < self.n_phi / 2
    }

    /// Trapezoidal rule `int f dtheta dphi` over the periodic grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        values.iter().sum::<f64>() * self.cell_area()
    }

    /// Samples `f(theta, phi)` at every node.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len())
            .map(|idx| {
                let (t, p) = self.angles(idx);
                f(t, p)
            })
            .collect()
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(GeometryError::LengthMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_sizes() {
        assert!(TorusGrid::new(7, 8).is_err());
        assert!(TorusGrid::new(8, 9).is_err());
        assert!(TorusGrid::new(6, 6).is_err());
        assert!(TorusGrid::new(8, 10).is_ok());
    }

    #[test]
    fn index_wraps_around() {
        let g = TorusGrid::new(8, 12).unwrap();
        assert_eq!(g.index(8, 12), 0);
        assert_eq!(g.index(9, 13), g.index(1, 1));
        assert_eq!(g.coords(g.index(3, 5)), (3, 5));
    }

    #[test]
    fn integrates_constant_and_trig() {
        let g = TorusGrid::square(16).unwrap();
        let one = vec![1.0; g.len()];
        assert!((g.integrate(&one) - 4.0 * PI * PI).abs() < 1e-12);
        let c2 = g.sample(|t, _| t.cos().powi(2));
        assert!((g.integrate(&c2) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn resolvability_is_strict() {
        let g = TorusGrid::square(8).unwrap();
        assert!(g.resolves(3, -3));
        assert!(!g.resolves(4, 0));
    }
}
