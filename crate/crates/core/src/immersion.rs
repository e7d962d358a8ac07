use nalgebra::Vector4;
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::grid::TorusGrid;
use crate::spectral::{wavenumber, Spectral};
use num_complex::Complex64;

pub type Point4 = Vector4<f64>;

/// Tolerance on `| |x| - 1 |` for every node of an immersion.
pub const SPHERE_TOL: f64 = 1e-12;

/// Smallest admissible metric determinant.
pub const MIN_METRIC_DET: f64 = 1e-14;

/// A sampled map from the flat torus into the unit three-sphere together with
/// its spectral first and second derivatives.
#[derive(Debug, Clone)]
pub struct Immersion {
    grid: TorusGrid,
    points: Vec<Point4>,
    d_theta: Vec<Point4>,
    d_phi: Vec<Point4>,
    d_theta_theta: Vec<Point4>,
    d_theta_phi: Vec<Point4>,
    d_phi_phi: Vec<Point4>,
}

fn gather(components: [Vec<f64>; 4]) -> Vec<Point4> {
    let n = components[0].len();
    (0..n)
        .map(|k| {
            Point4::new(
                components[0][k],
                components[1][k],
                components[2][k],
                components[3][k],
            )
        })
        .collect()
}

fn component(points: &[Point4], c: usize) -> Vec<f64> {
    points.iter().map(|p| p[c]).collect()
}

impl Immersion {
    /// Builds an immersion from node values already on the sphere.
    ///
    /// Fails with [`GeometryError::OffSphere`] when a node drifts more than
    /// [`SPHERE_TOL`] from the unit sphere and with
    /// [`GeometryError::DegenerateImmersion`] when the induced metric degenerates.
    pub fn from_points(grid: TorusGrid, points: Vec<Point4>) -> Result<Self> {
        grid.check_len(points.len())?;
        if let Some((node, drift)) = points
            .iter()
            .map(|p| p.norm() - 1.0)
            .enumerate()
            .find(|(_, d)| !(d.abs() <= SPHERE_TOL))
        {
            return Err(GeometryError::OffSphere { node, drift });
        }
        let sp = Spectral::new(grid);
        let coeffs: Vec<_> = (0..4)
            .into_par_iter()
            .map(|c| sp.forward(&component(&points, c)))
            .collect();
        let deriv = |p: u32, q: u32| -> Vec<Point4> {
            let comps: Vec<Vec<f64>> = coeffs
                .par_iter()
                .map(|cf| sp.derivative(cf, p, q))
                .collect();
            let comps: [Vec<f64>; 4] = comps.try_into().expect("four components");
            gather(comps)
        };
        let imm = Self {
            grid,
            d_theta: deriv(1, 0),
            d_phi: deriv(0, 1),
            d_theta_theta: deriv(2, 0),
            d_theta_phi: deriv(1, 1),
            d_phi_phi: deriv(0, 2),
            points,
        };
        imm.check_nondegenerate()?;
        Ok(imm)
    }

    /// Radially projects arbitrary nonzero node values onto the sphere first.
    pub fn from_projected(grid: TorusGrid, raw: Vec<Point4>) -> Result<Self> {
        let points = raw.into_iter().map(|p| p / p.norm()).collect();
        Self::from_points(grid, points)
    }

    /// The Clifford torus `(cos t, sin t, cos p, sin p) / sqrt 2`.
    pub fn clifford(grid: TorusGrid) -> Self {
        let points = (0..grid.len())
            .map(|idx| clifford_point(grid.angles(idx)))
            .collect();
        Self::from_points(grid, points).expect("the Clifford torus is an immersion")
    }

    /// Product torus `S^1(cos a) x S^1(sin a)`; `a = pi / 4` is the Clifford torus.
    pub fn product_torus(grid: TorusGrid, radius_angle: f64) -> Result<Self> {
        let (r, s) = (radius_angle.cos(), radius_angle.sin());
        let points = (0..grid.len())
            .map(|idx| {
                let (t, p) = grid.angles(idx);
                Point4::new(r * t.cos(), r * t.sin(), s * p.cos(), s * p.sin())
            })
            .collect();
        Self::from_projected(grid, points)
    }

    /// Trigonometric interpolation onto another grid followed by radial projection.
    pub fn resample(&self, target: TorusGrid) -> Result<Self> {
        if target == self.grid {
            return Ok(self.clone());
        }
        let sp = Spectral::new(self.grid);
        let comps: Vec<Vec<f64>> = (0..4)
            .into_par_iter()
            .map(|c| sp.resample(&component(&self.points, c), target))
            .collect();
        let comps: [Vec<f64>; 4] = comps.try_into().expect("four components");
        Self::from_projected(target, gather(comps))
    }

    /// Evaluates the trigonometric interpolant of the points on the tensor grid
    /// `thetas x phis` (row-major in `thetas`), radially projected onto the sphere.
    pub fn evaluate_tensor(&self, thetas: &[f64], phis: &[f64]) -> Vec<Point4> {
        let (nt, np) = (self.grid.n_theta(), self.grid.n_phi());
        let sp = Spectral::new(self.grid);
        let phase = |k: i64, x: f64| Complex64::from_polar(1.0, k as f64 * x);
        let e_phi: Vec<Vec<Complex64>> = (0..np)
            .map(|l| phis.iter().map(|&p| phase(wavenumber(l, np), p)).collect())
            .collect();
        let e_theta: Vec<Vec<Complex64>> = thetas
            .iter()
            .map(|&t| (0..nt).map(|k| phase(wavenumber(k, nt), t)).collect())
            .collect();
        let mut out = vec![Point4::zeros(); thetas.len() * phis.len()];
        for c in 0..4 {
            let coeffs = sp.forward(&component(&self.points, c));
            // partial[k][b] = sum_l c[k][l] e^{i l phi_b}
            let partial: Vec<Vec<Complex64>> = (0..nt)
                .into_par_iter()
                .map(|k| {
                    (0..phis.len())
                        .map(|b| (0..np).map(|l| coeffs[k * np + l] * e_phi[l][b]).sum())
                        .collect()
                })
                .collect();
            let vals: Vec<f64> = (0..thetas.len() * phis.len())
                .into_par_iter()
                .map(|idx| {
                    let (a, b) = (idx / phis.len(), idx % phis.len());
                    (0..nt)
                        .map(|k| e_theta[a][k] * partial[k][b])
                        .sum::<Complex64>()
                        .re
                })
                .collect();
            for (slot, v) in out.iter_mut().zip(vals) {
                slot[c] = v;
            }
        }
        out.into_iter().map(|p| p / p.norm()).collect()
    }

    fn check_nondegenerate(&self) -> Result<()> {
        for k in 0..self.grid.len() {
            let det = self.metric_det(k);
            if !(det > MIN_METRIC_DET) {
                return Err(GeometryError::DegenerateImmersion { node: k, det });
            }
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn metric_det(&self, k: usize) -> f64 {
        let (a, b) = (&self.d_theta[k], &self.d_phi[k]);
        a.norm_squared() * b.norm_squared() - a.dot(b).powi(2)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }
    pub fn points(&self) -> &[Point4] {
        &self.points
    }
    pub fn d_theta(&self) -> &[Point4] {
        &self.d_theta
    }
    pub fn d_phi(&self) -> &[Point4] {
        &self.d_phi
    }
    pub fn d_theta_theta(&self) -> &[Point4] {
        &self.d_theta_theta
    }
    pub fn d_theta_phi(&self) -> &[Point4] {
        &self.d_theta_phi
    }
    pub fn d_phi_phi(&self) -> &[Point4] {
        &self.d_phi_phi
    }

    /// Component `c` of the points as a scalar field.
    pub fn coordinate(&self, c: usize) -> Vec<f64> {
        component(&self.points, c)
    }

    /// Node-wise map followed by radial projection, rebuilding derivatives spectrally.
    pub fn map_points<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(usize, &Point4) -> Result<Point4> + Sync,
    {
        let mapped: Result<Vec<Point4>> =
            self.points.par_iter().enumerate().map(|(k, p)| f(k, p)).collect();
        Self::from_projected(self.grid, mapped?)
    }
}

/// `f0(theta, phi)` of the Clifford torus.
pub fn clifford_point((t, p): (f64, f64)) -> Point4 {
    Point4::new(t.cos(), t.sin(), p.cos(), p.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Clifford normal `n = (-phi, psi)` at `(theta, phi)`.
pub fn clifford_normal((t, p): (f64, f64)) -> Point4 {
    Point4::new(-t.cos(), -t.sin(), p.cos(), p.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

/// `d f0 / d theta` at `(theta, phi)`.
pub fn clifford_d_theta((t, _): (f64, f64)) -> Point4 {
    Point4::new(-t.sin(), t.cos(), 0.0, 0.0) * std::f64::consts::FRAC_1_SQRT_2
}

/// `d f0 / d phi` at `(theta, phi)`.
pub fn clifford_d_phi((_, p): (f64, f64)) -> Point4 {
    Point4::new(0.0, 0.0, -p.sin(), p.cos()) * std::f64::consts::FRAC_1_SQRT_2
}
