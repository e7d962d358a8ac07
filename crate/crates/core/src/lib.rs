//! Spectral geometry of immersed tori in the unit three-sphere.
//!
//! The crate samples maps `f: S^1 x S^1 -> S^3` on a periodic grid and
//! provides the Willmore energy and related integrals, the conformal maps
//! `F_v`, the canonical family `Sigma_(v,t)` through its area bounds, and the
//! linearized stability diagnostics around the Clifford torus.

// `!(x <= tol)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod immersion;
pub mod io;
pub mod moebius;
pub mod perturbation;
pub mod sobolev;
pub mod spectral;
pub mod stability;

pub use error::{GeometryError, Result};
pub use geometry::SurfaceGeometry;
pub use grid::TorusGrid;
pub use immersion::{Immersion, Point4};
pub use moebius::ConformalCenter;
pub use perturbation::{Component, Mode, PerturbationSpec};

/// `2 pi^2`, the Willmore energy and the area of the Clifford torus.
pub const TWO_PI_SQ: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
