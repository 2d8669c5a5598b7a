#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use sparse_eq::{Game, JointDistribution};

/// A distribution whose support keeps each profile with probability `keep`
/// (at least one profile survives) and uniform random weights on it.
pub fn random_distribution(game: &Game, seed: u64, keep: f64) -> JointDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut masses = Vec::new();
    for i in game.profiles() {
        if rng.gen_bool(keep) {
            masses.push((i, rng.gen_range(0.01..1.0)));
        }
    }
    if masses.is_empty() {
        masses.push((rng.gen_range(0..game.num_profiles()), 1.0));
    }
    let total: f64 = masses.iter().map(|(_, w)| w).sum();
    JointDistribution::from_masses(game, masses.into_iter().map(|(i, w)| (i, w / total))).unwrap()
}

#[derive(Debug, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub cce_exist: u64,
    pub cce_alg: u64,
    pub ce_exist_k: u64,
    pub ce_exist_b: u64,
    pub ce_alg: u64,
}

/// Bounds evaluated at 60 significant digits by `data/gen_bound_grid.py`.
pub fn bound_grid() -> Vec<BoundRow> {
    serde_json::from_str(include_str!("../data/bound_grid.json")).unwrap()
}
