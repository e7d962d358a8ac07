use thiserror::Error;

/// Failures raised by the geometry, conformal and stability pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid grid {n_theta}x{n_phi}: both sizes must be even and at least 8")]
    InvalidGrid { n_theta: usize, n_phi: usize },

    #[error("field length {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("point at node {node} is off the unit sphere (|x| - 1 = {drift:e})")]
    OffSphere { node: usize, drift: f64 },

    #[error("degenerate immersion at node {node}: det g = {det:e}")]
    DegenerateImmersion { node: usize, det: f64 },

    #[error("mode ({m}, {n}) is not resolvable on a {n_theta}x{n_phi} grid")]
    UnresolvedMode {
        m: i64,
        n: i64,
        n_theta: usize,
        n_phi: usize,
    },

    #[error("conformal center has |v| = {norm}, outside the admissible ball")]
    CenterOutsideBall { norm: f64 },

    #[error("pole singularity{}: |x - v|^2 = {dist_sq:e}", node.map(|n| format!(" at node {n}")).unwrap_or_default())]
    PoleSingularity { node: Option<usize>, dist_sq: f64 },

    #[error("unsupported Sobolev order {0}; expected one of -1, 0, 1, 2")]
    UnsupportedOrder(i32),

    #[error("point cloud is rank deficient")]
    DegenerateCloud,

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("cross-covariance is singular (smallest singular value {0:e})")]
    SingularCovariance(f64),

    #[error("surface is not a graph over the Clifford torus at node {node} (<f, f0> = {dot})")]
    NotGraphLike { node: usize, dot: f64 },

    #[error("right-hand side has a kernel component of norm {0:e}")]
    KernelObstruction(f64),

    #[error("surface file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
