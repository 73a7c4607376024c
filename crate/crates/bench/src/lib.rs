//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2n_core::operators::random_poly;
use su2n_core::TrigPoly;

/// `count` reproducible ring elements with `terms` terms each.
pub fn random_polys(count: usize, terms: usize, seed: u64) -> Vec<TrigPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_poly(&mut rng, terms, 9)).collect()
}
