//! The five experiment pipelines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use willmore_core::Point4;

pub mod boundary;
pub mod identities;
pub mod invariance;
pub mod stability;
pub mod sweep;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on `S^3`.
pub fn unit_vector(rng: &mut ChaCha8Rng) -> Point4 {
    loop {
        let v = Point4::from_fn(|_, _| StandardNormal.sample(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Indices `i` with `xs[i]` at least `from`, ordered by increasing `xs`.
pub(crate) fn ascending_from(xs: &[f64], from: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] >= from).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    idx.dedup_by(|a, b| xs[*a] == xs[*b]);
    idx
}

/// Count of steps along `values` that fail to strictly decrease.
pub(crate) fn non_decreasing_steps(values: &[f64]) -> usize {
    values.windows(2).filter(|w| !(w[1] < w[0])).count()
}
