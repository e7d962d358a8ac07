#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use willmore_core::Point4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on `S^3` by rejection from the unit ball.
pub fn unit_vector(rng: &mut impl Rng) -> Point4 {
    loop {
        let p = Point4::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = p.norm();
        if n > 0.1 && n <= 1.0 {
            return p / n;
        }
    }
}

/// Point of the open ball with norm at most `max_norm`.
pub fn ball_point(rng: &mut impl Rng, max_norm: f64) -> Point4 {
    unit_vector(rng) * (max_norm * rng.gen::<f64>())
}

/// Rotation in `SO(4)` from Gram-Schmidt of random vectors.
pub fn rotation(rng: &mut impl Rng) -> nalgebra::Matrix4<f64> {
    let mut cols: Vec<Point4> = Vec::new();
    while cols.len() < 4 {
        let mut v = unit_vector(rng);
        for c in &cols {
            v -= c * c.dot(&v);
        }
        if v.norm() > 1e-3 {
            cols.push(v.normalize());
        }
    }
    let mut m = nalgebra::Matrix4::from_columns(&cols);
    if m.determinant() < 0.0 {
        m.set_column(3, &(-cols[3]));
    }
    m
}
