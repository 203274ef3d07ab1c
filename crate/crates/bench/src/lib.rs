//! Deterministic inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` similarity lists of `len` values each, drawn around a few centres so
/// the clustering has structure to find.
pub fn similarity_lists(n: usize, len: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let centre = 0.2 + 0.15 * (i % 5) as f64;
            (0..len)
                .map(|_| (centre + rng.gen_range(-0.1..0.1)).clamp(0.0, 1.0))
                .collect()
        })
        .collect()
}
