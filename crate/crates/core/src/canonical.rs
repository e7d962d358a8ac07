//! The canonical family `Sigma_(v,t)`: parallel surfaces of conformal images,
//! evaluated through the two integral upper bounds for their area.
//!
//! * Heintze-Karcher route: `int max(J_t, 0) dA` over `Sigma_v`, with the signed
//!   Jacobian of the normal exponential map.
//! * Pushforward route: area (with multiplicity) of the image of the base surface
//!   under `P_{v,t}(x) = cos t F_v(x) + sin t Q_{x,v}(N)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::geometry::SurfaceGeometry;
use crate::grid::TorusGrid;
use crate::immersion::{Immersion, Point4};
use crate::moebius::ConformalCenter;
use crate::spectral::Spectral;

/// Index `(v, t)` of the canonical family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalParam {
    pub center: ConformalCenter,
    pub t: f64,
}

impl ConformalParam {
    pub fn new(center: ConformalCenter, t: f64) -> Result<Self> {
        if !(t.abs() <= PI) {
            return Err(GeometryError::Format(format!("t = {t} outside [-pi, pi]")));
        }
        Ok(Self { center, t })
    }
}

/// `P_{v,t}(x) = cos t F_v(x) + sin t (N - 2 <N, x - v>(x - v)/|x - v|^2)`.
pub fn parallel_map(center: &ConformalCenter, t: f64, x: &Point4, normal: &Point4) -> Result<Point4> {
    let (_, q) = center.differential(x)?;
    Ok(center.apply(x)? * t.cos() + q.apply(normal) * t.sin())
}

/// Signed Jacobian of the normal exponential map at distance `t`:
/// `(1 + H^2/4) - (H/2 cos t - sin t)^2 - sin^2 t |A°|^2 / 2`.
///
/// `(k1 - k2)^2 / 4 = |A°|^2 / 2` for surfaces, which is the form used here.
/// `mean_curvature` follows the orientation in which the map flows along `+N`
/// with principal curvatures measured against `-N`.
#[inline]
pub fn hk_jacobian(mean_curvature: f64, tracefree_sq: f64, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let h = mean_curvature;
    1.0 + 0.25 * h * h - (0.5 * h * c - s).powi(2) - s * s * 0.5 * tracefree_sq
}

/// Geometry of one conformal image `Sigma_v`, reused across many `t`.
#[derive(Debug, Clone)]
pub struct CanonicalSlice {
    pub center: ConformalCenter,
    pub geometry: SurfaceGeometry,
}

impl CanonicalSlice {
    pub fn new(center: ConformalCenter, f: &Immersion) -> Result<Self> {
        let image = center.transform(f)?;
        Ok(Self {
            center,
            geometry: SurfaceGeometry::compute(&image)?,
        })
    }

    /// Like [`CanonicalSlice::new`] but first refines `f` until the conformal
    /// blow-up near the pole is resolved (capped at `max_n` nodes per direction).
    pub fn resolved(center: ConformalCenter, f: &Immersion, max_n: usize) -> Result<Self> {
        let grid = resolving_grid(&center, f, max_n)?;
        Self::new(center, &f.resample(grid)?)
    }

    /// Heintze-Karcher proxy `int max(J_t, 0) dA_v`.
    pub fn area_hk(&self, t: f64) -> f64 {
        let g = &self.geometry;
        let vals: Vec<f64> = (0..g.grid().len())
            .into_par_iter()
            .map(|k| {
                let j = hk_jacobian(-g.mean_curvature[k], g.tracefree_sq[k], t);
                j.max(0.0) * g.area_density[k]
            })
            .collect();
        g.grid().integrate(&vals)
    }
}

/// Grid fine enough that the conformal factor `(1 - |v|^2)/|x - v|^2` is resolved:
/// its complex singularity sits roughly `min |x - v|` away in parameter space.
pub fn resolving_grid(center: &ConformalCenter, f: &Immersion, max_n: usize) -> Result<TorusGrid> {
    let grid = f.grid();
    if center.norm() == 0.0 {
        return Ok(grid);
    }
    let v = center.vector();
    let rho = f
        .points()
        .iter()
        .map(|x| (x - v).norm())
        .fold(f64::INFINITY, f64::min);
    let need = |n: usize| -> usize {
        let want = (RESOLUTION_CONSTANT / rho).ceil() as usize;
        let want = want.div_ceil(16) * 16;
        want.clamp(n, max_n.max(n))
    };
    TorusGrid::new(need(grid.n_theta()), need(grid.n_phi()))
}

/// Nodes per unit of `1 / min |x - v|`; gives roughly 1e-10 quadrature error.
pub const RESOLUTION_CONSTANT: f64 = 24.0;

/// Heintze-Karcher proxy for one `(v, t)`.
pub fn canonical_area_hk(center: &ConformalCenter, t: f64, f: &Immersion) -> Result<f64> {
    Ok(CanonicalSlice::new(*center, f)?.area_hk(t))
}

/// Area with multiplicity of `P_{v,t}(Sigma)`, from the spectral derivatives of
/// the mapped points. The image may fold, so degenerate nodes are allowed.
pub fn canonical_area_pushforward(center: &ConformalCenter, t: f64, f: &Immersion) -> Result<f64> {
    let geom = SurfaceGeometry::compute(f)?;
    canonical_area_pushforward_with(center, t, f, &geom)
}

pub fn canonical_area_pushforward_with(
    center: &ConformalCenter,
    t: f64,
    f: &Immersion,
    geom: &SurfaceGeometry,
) -> Result<f64> {
    let mapped: Result<Vec<Point4>> = f
        .points()
        .par_iter()
        .zip(&geom.normal)
        .enumerate()
        .map(|(k, (x, n))| {
            parallel_map(center, t, x, n).map_err(|e| match e {
                GeometryError::PoleSingularity { dist_sq, .. } => {
                    GeometryError::PoleSingularity {
                        node: Some(k),
                        dist_sq,
                    }
                }
                other => other,
            })
        })
        .collect();
    Ok(spectral_area(f.grid(), &mapped?))
}

/// `int sqrt(det g) dtheta dphi` for an arbitrary sampled map into `R^4`.
pub fn spectral_area(grid: TorusGrid, points: &[Point4]) -> f64 {
    let sp = Spectral::new(grid);
    let mut dt = vec![Point4::zeros(); grid.len()];
    let mut dp = vec![Point4::zeros(); grid.len()];
    for c in 0..4 {
        let comp: Vec<f64> = points.iter().map(|p| p[c]).collect();
        let coeffs = sp.forward(&comp);
        for (slot, v) in dt.iter_mut().zip(sp.derivative(&coeffs, 1, 0)) {
            slot[c] = v;
        }
        for (slot, v) in dp.iter_mut().zip(sp.derivative(&coeffs, 0, 1)) {
            slot[c] = v;
        }
    }
    let dens: Vec<f64> = dt
        .iter()
        .zip(&dp)
        .map(|(a, b)| (a.norm_squared() * b.norm_squared() - a.dot(b).powi(2)).max(0.0).sqrt())
        .collect();
    grid.integrate(&dens)
}

/// Area of `Sigma_v` pulled back to the base: `int scale(x)^2 dA`.
pub fn conformal_image_area(center: &ConformalCenter, f: &Immersion, geom: &SurfaceGeometry) -> Result<f64> {
    let vals: Result<Vec<f64>> = f
        .points()
        .par_iter()
        .zip(&geom.area_density)
        .map(|(x, d)| Ok(center.scale(x)?.powi(2) * d))
        .collect();
    Ok(f.grid().integrate(&vals?))
}

/// `int |(x - v)^perp / |x - v|^2|^2 dA` with `(x - v)^perp` the part of `x - v`
/// normal to the surface in `R^4` (along `x` and `N`).
pub fn monotonicity_integral(f: &Immersion, geom: &SurfaceGeometry, v: &Point4) -> f64 {
    let vals: Vec<f64> = f
        .points()
        .par_iter()
        .zip(&geom.normal)
        .zip(&geom.area_density)
        .map(|((x, n), dens)| {
            let d = x - v;
            let perp = x * d.dot(x) + n * d.dot(n);
            (perp.norm_squared() / d.norm_squared().powi(2)) * dens
        })
        .collect();
    f.grid().integrate(&vals)
}

/// Status of one sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Ok,
    /// Proxy above `5 pi` for `|v| >= 0.95`; the proxy is only an upper bound.
    ProxyExceedance,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepCell {
    pub radius: f64,
    pub dir_index: usize,
    pub t: f64,
    pub area: Option<f64>,
    pub status: CellStatus,
}

/// Location and value of the largest proxy area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepArgmax {
    pub radius: f64,
    pub dir_index: usize,
    pub t: f64,
    pub area: f64,
}

/// Five-pi ceiling checked on cells with `|v|` at least this large.
pub const FIVE_PI_RADIUS: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepTable {
    pub radii: Vec<f64>,
    pub directions: Vec<[f64; 4]>,
    pub t_grid: Vec<f64>,
    /// Row-major over `(radius, direction, t)`.
    pub cells: Vec<SweepCell>,
    pub argmax: Option<SweepArgmax>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Cap on the per-center refined grid.
    pub max_grid: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { max_grid: 512 }
    }
}

/// Fills the `(radius, direction, t)` table with the Heintze-Karcher proxy.
///
/// Per-center failures are recorded as masked cells instead of aborting the sweep.
pub fn sweep(
    f: &Immersion,
    radii: &[f64],
    directions: &[Point4],
    t_grid: &[f64],
    options: SweepOptions,
) -> SweepTable {
    let centers: Vec<(usize, usize)> = (0..radii.len())
        .flat_map(|r| (0..directions.len()).map(move |d| (r, d)))
        .collect();
    let rows: Vec<Vec<SweepCell>> = centers
        .par_iter()
        .map(|&(ri, di)| {
            let radius = radii[ri];
            let slice = ConformalCenter::along(&directions[di], radius)
                .and_then(|c| CanonicalSlice::resolved(c, f, options.max_grid));
            t_grid
                .iter()
                .map(|&t| match &slice {
                    Ok(s) => {
                        let area = s.area_hk(t);
                        let status = if radius >= FIVE_PI_RADIUS && area > 5.0 * PI {
                            CellStatus::ProxyExceedance
                        } else {
                            CellStatus::Ok
                        };
                        SweepCell {
                            radius,
                            dir_index: di,
                            t,
                            area: Some(area),
                            status,
                        }
                    }
                    Err(e) => SweepCell {
                        radius,
                        dir_index: di,
                        t,
                        area: None,
                        status: CellStatus::Failed(e.to_string()),
                    },
                })
                .collect()
        })
        .collect();
    let cells: Vec<SweepCell> = rows.into_iter().flatten().collect();
    let mut argmax: Option<SweepArgmax> = None;
    let mut failures = Vec::new();
    for cell in &cells {
        match (&cell.status, cell.area) {
            (CellStatus::Failed(msg), _) => failures.push(format!(
                "radius {} dir {} t {}: {msg}",
                cell.radius, cell.dir_index, cell.t
            )),
            (_, Some(a))
                if argmax.is_none_or(|m| beats(a, cell, &m)) => {
                    argmax = Some(SweepArgmax {
                        radius: cell.radius,
                        dir_index: cell.dir_index,
                        t: cell.t,
                        area: a,
                    });
                }
            _ => {}
        }
    }
    SweepTable {
        radii: radii.to_vec(),
        directions: directions.iter().map(|d| (*d).into()).collect(),
        t_grid: t_grid.to_vec(),
        cells,
        argmax,
        failures,
    }
}

/// Relative band inside which two sweep areas count as tied.
pub const ARGMAX_TIE_TOL: f64 = 1e-12;

/// Larger area wins; ties (such as `t = 0` against its antipodal copy at
/// `t = +-pi`) go to the smaller `|t|`, then the smaller radius.
fn beats(area: f64, cell: &SweepCell, best: &SweepArgmax) -> bool {
    let band = ARGMAX_TIE_TOL * best.area.abs().max(1.0);
    if area > best.area + band {
        return true;
    }
    if area < best.area - band {
        return false;
    }
    (cell.t.abs(), cell.radius) < (best.t.abs(), best.radius)
}

impl SweepTable {
    pub fn max_area(&self) -> Option<f64> {
        self.cells
            .iter()
            .filter_map(|c| c.area)
            .fold(None, |m, a| Some(m.map_or(a, |m: f64| m.max(a))))
    }

    pub fn exceedances(&self) -> impl Iterator<Item = &SweepCell> {
        self.cells
            .iter()
            .filter(|c| c.status == CellStatus::ProxyExceedance)
    }

    /// CSV with header `radius,dirIndex,t,area,status`; masked areas are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,dirIndex,t,area,status\n");
        for c in &self.cells {
            let status = match &c.status {
                CellStatus::Ok => "ok".to_string(),
                CellStatus::ProxyExceedance => "proxy-exceedance".to_string(),
                CellStatus::Failed(_) => "failed".to_string(),
            };
            let area = c.area.map(|a| format!("{a:?}")).unwrap_or_default();
            out.push_str(&format!("{:?},{},{:?},{},{}\n", c.radius, c.dir_index, c.t, area, status));
        }
        out
    }
}

/// `n` uniform steps `-pi + 2 pi k / n`, which contains `t = 0` for even `n`.
pub fn uniform_t_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect()
}

/// Deterministic low-discrepancy directions on `S^3`: an additive recurrence in
/// the unit cube pushed through the volume-preserving map
/// `(u1, u2, u3) -> (sqrt(1-u1) e^{2 pi i u2}, sqrt(u1) e^{2 pi i u3})`.
pub fn low_discrepancy_directions(count: usize) -> Vec<Point4> {
    low_discrepancy_directions_from(0, count)
}

/// Same sequence starting after `offset` terms.
pub fn low_discrepancy_directions_from(offset: u64, count: usize) -> Vec<Point4> {
    // Plastic-number generalization of the golden ratio in three dimensions.
    let g = 1.220_744_084_605_759_5_f64;
    let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    (offset + 1..=offset + count as u64)
        .map(|n| {
            let u: Vec<f64> = alpha.iter().map(|a| (n as f64 * a).fract()).collect();
            let (a, b) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
            let (s2, c2) = (2.0 * PI * u[1]).sin_cos();
            let (s3, c3) = (2.0 * PI * u[2]).sin_cos();
            Point4::new(a * s2, a * c2, b * s3, b * c3)
        })
        .collect()
}

/// Least-squares geodesic sphere `{x : <x, w> = c}` through a point cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFit {
    pub normal: Point4,
    pub offset: f64,
    pub rms_residual: f64,
}

/// Fits `<x, w> = c` with `|w| = 1`: `w` is the least-variance direction of the
/// centered cloud and `c = <mean, w>`, oriented so that `c >= 0`.
pub fn geodesic_sphere_fit(points: &[Point4]) -> Result<SphereFit> {
    if points.len() < 5 {
        return Err(GeometryError::DegenerateCloud);
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Point4::zeros(), |acc, p| acc + p) / n;
    let cov = points
        .iter()
        .fold(nalgebra::Matrix4::zeros(), |acc, p| {
            let d = p - mean;
            acc + d * d.transpose()
        })
        / n;
    let eig = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[3]];
    if !(largest > 0.0) || eig.eigenvalues[order[1]] <= 1e-12 * largest {
        return Err(GeometryError::DegenerateCloud);
    }
    let mut w: Point4 = eig.eigenvectors.column(order[0]).into_owned();
    let mut c = mean.dot(&w);
    if c < 0.0 {
        w = -w;
        c = -c;
    }
    let rms = (points.iter().map(|p| (p.dot(&w) - c).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SphereFit {
        normal: w,
        offset: c,
        rms_residual: rms,
    })
}

impl SphereFit {
    /// Fibonacci-lattice samples of the fitted sphere (center `c w`, radius `sqrt(1 - c^2)`).
    pub fn sample(&self, count: usize) -> Vec<Point4> {
        let basis = orthonormal_complement(&self.normal);
        let radius = (1.0 - self.offset * self.offset).max(0.0).sqrt();
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let rho = (1.0 - z * z).sqrt();
                let (s, c) = (golden * i as f64).sin_cos();
                self.normal * self.offset
                    + (basis[0] * (rho * c) + basis[1] * (rho * s) + basis[2] * z) * radius
            })
            .collect()
    }
}

fn orthonormal_complement(w: &Point4) -> [Point4; 3] {
    let mut basis: Vec<Point4> = Vec::with_capacity(3);
    for i in 0..4 {
        let mut e = Point4::zeros();
        e[i] = 1.0;
        let mut r = e - w * w.dot(&e);
        for b in &basis {
            r -= b * b.dot(&r);
        }
        if r.norm() > 1e-6 {
            basis.push(r.normalize());
        }
        if basis.len() == 3 {
            break;
        }
    }
    [basis[0], basis[1], basis[2]]
}

/// Symmetric discrete Hausdorff distance in the chord metric of `R^4`.
pub fn hausdorff_distance(a: &[Point4], b: &[Point4]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

fn directed_hausdorff(a: &[Point4], b: &[Point4]) -> f64 {
    a.par_iter()
        .map(|p| {
            b.iter()
                .map(|q| (p - q).norm_squared())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// One `(tau, t)` comparison `A(t) <= (sin t / sin tau)^2 A(tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AreaComparison {
    pub tau: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

/// Slack allowed in the area comparison.
pub const AREA_COMPARISON_SLACK: f64 = 1e-6;

pub fn area_comparison_check(
    center: &ConformalCenter,
    f: &Immersion,
    pairs: &[(f64, f64)],
) -> Result<Vec<AreaComparison>> {
    let slice = CanonicalSlice::new(*center, f)?;
    Ok(area_comparison_with(&slice, pairs))
}

pub fn area_comparison_with(slice: &CanonicalSlice, pairs: &[(f64, f64)]) -> Vec<AreaComparison> {
    pairs
        .iter()
        .map(|&(tau, t)| {
            let lhs = slice.area_hk(t);
            let rhs = (t.sin() / tau.sin()).powi(2) * slice.area_hk(tau);
            AreaComparison {
                tau,
                t,
                lhs,
                rhs,
                violated: lhs > rhs + AREA_COMPARISON_SLACK,
            }
        })
        .collect()
}

/// Samples the base on a tensor grid warped toward `(theta0, phi0)` by the circle
/// Moebius map `s -> 2 atan(kappa tan(s / 2))`, so that a conformal blow-up with
/// dilation `1 / kappa` sees roughly uniform spacing, then applies `F_v`.
pub fn warped_image_cloud(
    center: &ConformalCenter,
    f: &Immersion,
    focus: (f64, f64),
    kappa: f64,
    n: usize,
) -> Result<Vec<Point4>> {
    let warp = |s: f64| 2.0 * (kappa * (0.5 * s).tan()).atan();
    let samples: Vec<f64> = (0..n)
        .map(|i| warp(-PI + 2.0 * PI * (i as f64 + 0.5) / n as f64))
        .collect();
    let thetas: Vec<f64> = samples.iter().map(|s| focus.0 + s).collect();
    let phis: Vec<f64> = samples.iter().map(|s| focus.1 + s).collect();
    f.evaluate_tensor(&thetas, &phis)
        .par_iter()
        .map(|x| center.apply(x))
        .collect()
}
