//! Seeded inputs shared by the benchmarks.

use isotri_core::{CyclicGroup, GridSet, GroupFunction2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random subset of the `side x side` grid with each cell present with
/// probability `density`.
pub fn random_set(side: usize, density: f64, seed: u64) -> GridSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: Vec<(usize, usize)> =
        (0..side).flat_map(|r| (0..side).map(move |c| (r, c))).filter(|_| rng.random_bool(density)).collect();
    GridSet::from_cells(side, cells).expect("side >= 1")
}

/// Uniform `[0, 1]`-valued function on `(Z/N)^2`.
pub fn random_function(modulus: usize, seed: u64) -> GroupFunction2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = CyclicGroup::new(modulus).expect("modulus >= 1");
    GroupFunction2D::from_fn(group, |_, _| rng.random::<f64>())
}
