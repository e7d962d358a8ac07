//! Pointwise differential geometry of an immersed torus in the unit three-sphere
//! and the integrated quantities built from it.
//!
//! Conventions: `A_ij = <f_ij, N>`, `H = g^ij A_ij` (trace of the shape
//! operator), `K = 1 + det(g^-1 A)` (Gauss equation in the unit sphere).

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4, MIN_METRIC_DET};
use crate::spectral::Spectral;

/// Symmetric 2x2 tensor stored as `(theta theta, theta phi, phi phi)`.
pub type Sym2 = [f64; 3];

#[inline]
fn sym_det(m: &Sym2) -> f64 {
    m[0] * m[2] - m[1] * m[1]
}

/// The vector `x` with `<x, d> = det[a; b; c; d]` for every `d`.
pub fn cross4(a: &Point4, b: &Point4, c: &Point4) -> Point4 {
    let mut out = Vector4::zeros();
    for i in 0..4 {
        let mut m = Matrix4::zeros();
        m.set_row(0, &a.transpose());
        m.set_row(1, &b.transpose());
        m.set_row(2, &c.transpose());
        m[(3, i)] = 1.0;
        out[i] = m.determinant();
    }
    out
}

/// Unit normal in `T S^3` orthogonal to the tangent plane.
///
/// Oriented so that the Clifford torus gets `n = (-phi, psi)`.
pub fn unit_normal(x: &Point4, x_theta: &Point4, x_phi: &Point4) -> Point4 {
    let mut n = -cross4(x, x_theta, x_phi);
    // One Gram-Schmidt sweep removes the rounding left by the cofactor expansion.
    for e in [x, x_theta, x_phi] {
        let e2 = e.norm_squared();
        n -= e * (n.dot(e) / e2);
    }
    n / n.norm()
}

#[derive(Debug, Clone)]
pub struct SurfaceGeometry {
    grid: TorusGrid,
    pub metric: Vec<Sym2>,
    pub normal: Vec<Point4>,
    pub second_form: Vec<Sym2>,
    pub mean_curvature: Vec<f64>,
    pub gauss_curvature: Vec<f64>,
    /// `|A|^2_g`
    pub second_form_sq: Vec<f64>,
    /// `|A - (H/2) g|^2_g = |A|^2 - H^2 / 2`
    pub tracefree_sq: Vec<f64>,
    /// `sqrt(det g)`
    pub area_density: Vec<f64>,
}

struct NodeGeometry {
    g: Sym2,
    n: Point4,
    a: Sym2,
    h: f64,
    k: f64,
    a_sq: f64,
    dens: f64,
}

impl SurfaceGeometry {
    pub fn compute(f: &Immersion) -> Result<Self> {
        let grid = f.grid();
        let nodes: Result<Vec<NodeGeometry>> = (0..grid.len())
            .into_par_iter()
            .map(|k| node_geometry(f, k))
            .collect();
        let nodes = nodes?;
        Ok(Self {
            grid,
            metric: nodes.iter().map(|n| n.g).collect(),
            normal: nodes.iter().map(|n| n.n).collect(),
            second_form: nodes.iter().map(|n| n.a).collect(),
            mean_curvature: nodes.iter().map(|n| n.h).collect(),
            gauss_curvature: nodes.iter().map(|n| n.k).collect(),
            second_form_sq: nodes.iter().map(|n| n.a_sq).collect(),
            tracefree_sq: nodes.iter().map(|n| n.a_sq - 0.5 * n.h * n.h).collect(),
            area_density: nodes.iter().map(|n| n.dens).collect(),
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    fn integrate_density<F: Fn(usize) -> f64 + Sync>(&self, f: F) -> f64 {
        let vals: Vec<f64> = (0..self.grid.len())
            .into_par_iter()
            .map(|k| f(k) * self.area_density[k])
            .collect();
        self.grid.integrate(&vals)
    }

    pub fn area(&self) -> f64 {
        self.integrate_density(|_| 1.0)
    }

    /// `int (1 + H^2 / 4) dA`
    pub fn willmore_energy(&self) -> f64 {
        self.integrate_density(|k| 1.0 + 0.25 * self.mean_curvature[k].powi(2))
    }

    pub fn total_gauss_curvature(&self) -> f64 {
        self.integrate_density(|k| self.gauss_curvature[k])
    }

    /// `int |A°|^2 dA`, conformally invariant.
    pub fn tracefree_energy(&self) -> f64 {
        self.integrate_density(|k| self.tracefree_sq[k])
    }

    /// `int |A_R4|^2 dA = int (|A|^2 + 2) dA`: the second fundamental form of the
    /// surface viewed in `R^4` picks up the metric itself along the radial normal.
    pub fn ambient_second_form_energy(&self) -> f64 {
        self.integrate_density(|k| self.second_form_sq[k] + 2.0)
    }

    /// `||H||_{L^2(dA)}`
    pub fn mean_curvature_l2(&self) -> f64 {
        self.integrate_density(|k| self.mean_curvature[k].powi(2)).sqrt()
    }

    /// `||H||_{L^1(dA)}`
    pub fn mean_curvature_l1(&self) -> f64 {
        self.integrate_density(|k| self.mean_curvature[k].abs())
    }

    /// Principal curvatures `(k1, k2)` with `k1 >= k2` at node `k`.
    pub fn principal_curvatures(&self, k: usize) -> (f64, f64) {
        let h = self.mean_curvature[k];
        let det = self.gauss_curvature[k] - 1.0;
        let disc = (0.25 * h * h - det).max(0.0).sqrt();
        (0.5 * h + disc, 0.5 * h - disc)
    }
}

fn node_geometry(f: &Immersion, k: usize) -> Result<NodeGeometry> {
    let x = &f.points()[k];
    let (ft, fp) = (&f.d_theta()[k], &f.d_phi()[k]);
    let g = [ft.norm_squared(), ft.dot(fp), fp.norm_squared()];
    let det = sym_det(&g);
    if !(det > MIN_METRIC_DET) {
        return Err(GeometryError::DegenerateImmersion { node: k, det });
    }
    let n = unit_normal(x, ft, fp);
    let a = [
        f.d_theta_theta()[k].dot(&n),
        f.d_theta_phi()[k].dot(&n),
        f.d_phi_phi()[k].dot(&n),
    ];
    let inv = [g[2] / det, -g[1] / det, g[0] / det];
    let h = inv[0] * a[0] + 2.0 * inv[1] * a[1] + inv[2] * a[2];
    // Shape operator S = g^-1 A (not symmetric as a matrix).
    let s00 = inv[0] * a[0] + inv[1] * a[1];
    let s01 = inv[0] * a[1] + inv[1] * a[2];
    let s10 = inv[1] * a[0] + inv[2] * a[1];
    let s11 = inv[1] * a[1] + inv[2] * a[2];
    let a_sq = s00 * s00 + 2.0 * s01 * s10 + s11 * s11;
    let k_gauss = 1.0 + sym_det(&a) / det;
    Ok(NodeGeometry {
        g,
        n,
        a,
        h,
        k: k_gauss,
        a_sq,
        dens: det.sqrt(),
    })
}

/// Gauss curvature from the metric alone (Brioschi formula), using spectral
/// derivatives of `E, F, G`. Independent of the normal and of the Gauss equation.
pub fn intrinsic_gauss_curvature(f: &Immersion) -> Vec<f64> {
    let grid = f.grid();
    let sp = Spectral::new(grid);
    let e: Vec<f64> = f.d_theta().iter().map(|v| v.norm_squared()).collect();
    let ff: Vec<f64> = f
        .d_theta()
        .iter()
        .zip(f.d_phi())
        .map(|(a, b)| a.dot(b))
        .collect();
    let gg: Vec<f64> = f.d_phi().iter().map(|v| v.norm_squared()).collect();
    let (ce, cf, cg) = (sp.forward(&e), sp.forward(&ff), sp.forward(&gg));
    let e_u = sp.derivative(&ce, 1, 0);
    let e_v = sp.derivative(&ce, 0, 1);
    let e_vv = sp.derivative(&ce, 0, 2);
    let f_u = sp.derivative(&cf, 1, 0);
    let f_v = sp.derivative(&cf, 0, 1);
    let f_uv = sp.derivative(&cf, 1, 1);
    let g_u = sp.derivative(&cg, 1, 0);
    let g_v = sp.derivative(&cg, 0, 1);
    let g_uu = sp.derivative(&cg, 2, 0);
    (0..grid.len())
        .map(|k| {
            let (e, f, g) = (e[k], ff[k], gg[k]);
            let m1 = nalgebra::Matrix3::new(
                -0.5 * e_vv[k] + f_uv[k] - 0.5 * g_uu[k],
                0.5 * e_u[k],
                f_u[k] - 0.5 * e_v[k],
                f_v[k] - 0.5 * g_u[k],
                e,
                f,
                0.5 * g_v[k],
                f,
                g,
            );
            let m2 = nalgebra::Matrix3::new(
                0.0,
                0.5 * e_v[k],
                0.5 * g_u[k],
                0.5 * e_v[k],
                e,
                f,
                0.5 * g_u[k],
                f,
                g,
            );
            (m1.determinant() - m2.determinant()) / (e * g - f * f).powi(2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{clifford_normal, clifford_point};
    use std::f64::consts::{FRAC_PI_4, PI};

    const TWO_PI_SQ: f64 = 2.0 * PI * PI;

    #[test]
    fn cross4_is_orthogonal_and_oriented() {
        let (t, p) = (0.0, 0.0);
        let x = clifford_point((t, p));
        let n = clifford_normal((t, p));
        let ft = crate::immersion::clifford_d_theta((t, p));
        let fp = crate::immersion::clifford_d_phi((t, p));
        let c = cross4(&x, &ft, &fp);
        assert!(c.dot(&x).abs() < 1e-15 && c.dot(&ft).abs() < 1e-15 && c.dot(&fp).abs() < 1e-15);
        assert!((unit_normal(&x, &ft, &fp) - n).norm() < 1e-15);
    }

    #[test]
    fn clifford_geometry() {
        let g = TorusGrid::square(32).unwrap();
        let geom = SurfaceGeometry::compute(&Immersion::clifford(g)).unwrap();
        for k in 0..g.len() {
            assert!((geom.normal[k] - clifford_normal(g.angles(k))).norm() < 1e-12);
            assert!(geom.mean_curvature[k].abs() < 1e-12);
            assert!(geom.gauss_curvature[k].abs() < 1e-12);
            assert!((geom.tracefree_sq[k] - 2.0).abs() < 1e-12);
            let (k1, k2) = geom.principal_curvatures(k);
            assert!((k1 - 1.0).abs() < 1e-6 && (k2 + 1.0).abs() < 1e-6);
        }
        assert!((geom.willmore_energy() - TWO_PI_SQ).abs() < 1e-12);
        assert!((geom.area() - TWO_PI_SQ).abs() < 1e-12);
        assert!((geom.tracefree_energy() - 2.0 * TWO_PI_SQ).abs() < 1e-11);
        assert!((0.5 * geom.tracefree_energy() - geom.willmore_energy()).abs() < 1e-11);
    }

    /// Product tori S^1(r) x S^1(s) have constant principal curvatures s/r and -r/s
    /// (up to orientation), so H = s/r - r/s and W = pi^2 / (r s).
    #[test]
    fn product_torus_matches_closed_form() {
        let g = TorusGrid::square(16).unwrap();
        for alpha in [0.5, FRAC_PI_4, 1.0] {
            let (r, s) = (f64::cos(alpha), f64::sin(alpha));
            let geom = SurfaceGeometry::compute(&Immersion::product_torus(g, alpha).unwrap()).unwrap();
            let h_exact = s / r - r / s;
            for k in 0..g.len() {
                assert!((geom.mean_curvature[k].abs() - h_exact.abs()).abs() < 1e-11);
                let (k1, k2) = geom.principal_curvatures(k);
                let mut want = [s / r, -r / s];
                if geom.mean_curvature[k] * h_exact < 0.0 {
                    want = [r / s, -s / r];
                }
                assert!((k1 - want[0]).abs() < 1e-6 && (k2 - want[1]).abs() < 1e-6);
            }
            let w = PI * PI / (r * s);
            assert!((geom.willmore_energy() - w).abs() < 1e-10 * w);
            assert!((geom.area() - 4.0 * PI * PI * r * s).abs() < 1e-11);
        }
    }

    #[test]
    fn brioschi_agrees_with_gauss_equation() {
        let g = TorusGrid::square(32).unwrap();
        let f = Immersion::product_torus(g, 0.6)
            .unwrap()
            .map_points(|_, p| Ok(p + Point4::new(0.05 * p[2] * p[1], 0.0, 0.03 * p[0], 0.0)))
            .unwrap();
        let geom = SurfaceGeometry::compute(&f).unwrap();
        let kint = intrinsic_gauss_curvature(&f);
        for (k, (a, b)) in kint.iter().zip(&geom.gauss_curvature).enumerate() {
            assert!((a - b).abs() < 1e-8, "{k}");
        }
    }
}
