//! The conformal maps `F_v(x) = (1 - |v|^2)(x - v)/|x - v|^2 - v` of the unit
//! three-sphere, their differentials, and the stereographic factorization
//! `F_v = G_v^-1 . (lambda *) . G_v`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::immersion::{Immersion, Point4};

/// Largest admissible `|v|`.
pub const MAX_CENTER_NORM: f64 = 1.0 - 1e-9;

/// Below this `|x - v|^2` a point is treated as hitting the pole.
pub const POLE_TOL: f64 = 1e-14;

/// Parameter `v` of `F_v`, strictly inside the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct ConformalCenter(Point4);

impl TryFrom<[f64; 4]> for ConformalCenter {
    type Error = GeometryError;
    fn try_from(v: [f64; 4]) -> Result<Self> {
        ConformalCenter::new(Point4::from(v))
    }
}

impl From<ConformalCenter> for [f64; 4] {
    fn from(c: ConformalCenter) -> Self {
        c.0.into()
    }
}

/// The reflection `Q(w) = w - 2 <w, d> d / |d|^2` across the hyperplane orthogonal to `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    axis: Point4,
    axis_sq: f64,
}

impl Reflection {
    pub fn new(axis: Point4) -> Self {
        Self {
            axis_sq: axis.norm_squared(),
            axis,
        }
    }

    #[inline]
    pub fn apply(&self, w: &Point4) -> Point4 {
        w - self.axis * (2.0 * w.dot(&self.axis) / self.axis_sq)
    }

    pub fn matrix(&self) -> nalgebra::Matrix4<f64> {
        nalgebra::Matrix4::identity() - self.axis * self.axis.transpose() * (2.0 / self.axis_sq)
    }
}

impl ConformalCenter {
    pub fn new(v: Point4) -> Result<Self> {
        let norm = v.norm();
        if !(norm <= MAX_CENTER_NORM) {
            return Err(GeometryError::CenterOutsideBall { norm });
        }
        Ok(Self(v))
    }

    pub fn origin() -> Self {
        Self(Point4::zeros())
    }

    /// `radius * direction / |direction|`.
    pub fn along(direction: &Point4, radius: f64) -> Result<Self> {
        Self::new(direction.normalize() * radius)
    }

    pub fn vector(&self) -> &Point4 {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn negate(&self) -> Self {
        Self(-self.0)
    }

    #[inline]
    fn offset(&self, x: &Point4, node: Option<usize>) -> Result<(Point4, f64)> {
        let d = x - self.0;
        let d2 = d.norm_squared();
        if d2 < POLE_TOL {
            return Err(GeometryError::PoleSingularity { node, dist_sq: d2 });
        }
        Ok((d, d2))
    }

    /// `F_v(x)`, renormalized onto the sphere.
    pub fn apply(&self, x: &Point4) -> Result<Point4> {
        self.apply_at(x, None)
    }

    fn apply_at(&self, x: &Point4, node: Option<usize>) -> Result<Point4> {
        let (d, d2) = self.offset(x, node)?;
        let y = d * ((1.0 - self.0.norm_squared()) / d2) - self.0;
        Ok(y / y.norm())
    }

    /// `DF_v(x) = scale * Q_{x,v}`.
    pub fn differential(&self, x: &Point4) -> Result<(f64, Reflection)> {
        let (d, d2) = self.offset(x, None)?;
        Ok(((1.0 - self.0.norm_squared()) / d2, Reflection::new(d)))
    }

    /// Conformal factor `(1 - |v|^2) / |x - v|^2` alone.
    pub fn scale(&self, x: &Point4) -> Result<f64> {
        let (_, d2) = self.offset(x, None)?;
        Ok((1.0 - self.0.norm_squared()) / d2)
    }

    /// `DF_v(N) / |DF_v(N)|`, which is `Q_{x,v}(N)` since `Q` is orthogonal.
    pub fn pushforward_normal(&self, x: &Point4, normal: &Point4) -> Result<Point4> {
        let (d, _) = self.offset(x, None)?;
        let q = Reflection::new(d).apply(normal);
        Ok(q / q.norm())
    }

    /// `Sigma_v = F_v(Sigma)` with derivatives recomputed on the mapped points.
    pub fn transform(&self, f: &Immersion) -> Result<Immersion> {
        if self.0 == Point4::zeros() {
            return Ok(f.clone());
        }
        f.map_points(|k, x| self.apply_at(x, Some(k)))
    }

    pub fn stereographic_frame(&self) -> StereographicFrame {
        StereographicFrame::new(self)
    }
}

/// Stereographic chart from the pole `-v/|v|` onto the hyperplane `H_v = v^perp`,
/// with the dilation factor `lambda = (1 + |v|)/(1 - |v|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereographicFrame {
    pub direction: Point4,
    pub lambda: f64,
}

impl StereographicFrame {
    /// For `v = 0` the direction is `e_1`; any direction works since `lambda = 1`.
    pub fn new(center: &ConformalCenter) -> Self {
        let r = center.norm();
        let direction = if r > 0.0 {
            center.vector() / r
        } else {
            Point4::new(1.0, 0.0, 0.0, 0.0)
        };
        Self {
            direction,
            lambda: (1.0 + r) / (1.0 - r),
        }
    }

    /// `G_v(x) = 2 (x - <x, e> e) / (1 + <x, e>)`, a point of `H_v` written in `R^4`.
    pub fn project(&self, x: &Point4) -> Result<Point4> {
        let c = x.dot(&self.direction);
        let denom = 1.0 + c;
        if denom < POLE_TOL {
            return Err(GeometryError::PoleSingularity {
                node: None,
                dist_sq: (x + self.direction).norm_squared(),
            });
        }
        Ok((x - self.direction * c) * (2.0 / denom))
    }

    /// `G_v^-1(z) = 4 z / (4 + |z|^2) + (4 - |z|^2) e / (4 + |z|^2)`.
    pub fn unproject(&self, z: &Point4) -> Point4 {
        let z2 = z.norm_squared();
        z * (4.0 / (4.0 + z2)) + self.direction * ((4.0 - z2) / (4.0 + z2))
    }

    /// `|F_v(x) - G^-1(lambda G(x))|`.
    pub fn decompose_check(&self, center: &ConformalCenter, x: &Point4) -> Result<f64> {
        let direct = center.apply(x)?;
        let factored = self.unproject(&(self.project(x)? * self.lambda));
        Ok((direct - factored).norm())
    }
}
