#![allow(dead_code)]

use isotri_core::{CyclicGroup, GridSet, GroupFunction1D, GroupFunction2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(n: usize) -> CyclicGroup {
    CyclicGroup::new(n).unwrap()
}

pub fn uniform2(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> GroupFunction2D {
    GroupFunction2D::from_fn(group(n), |_, _| rng.random_range(lo..=hi))
}

pub fn uniform1(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> GroupFunction1D {
    GroupFunction1D::from_fn(group(n), |_| rng.random_range(lo..=hi))
}

pub fn random_set(rng: &mut ChaCha8Rng, side: usize, density: f64) -> GridSet {
    let cells: Vec<(usize, usize)> = (0..side)
        .flat_map(|r| (0..side).map(move |c| (r, c)))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|_| rng.random_bool(density))
        .collect();
    GridSet::from_cells(side, cells).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
