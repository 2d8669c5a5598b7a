//! k-uniform approximate equilibria by sampling from exact ones.
//!
//! Each sparsifier draws `k` profiles i.i.d. from a seed equilibrium, checks
//! the empirical distribution with the matching verifier, and redraws on
//! failure. Attempt `t` (1-based) uses the seed [`attempt_seed`]`(seed, t)`,
//! so runs are reproducible and attempts use independent streams.

mod bounds;

pub use bounds::{
    hoeffding_failure_bound, k_bound_cce_alg, k_bound_cce_exist, k_bound_ce_alg, k_bound_ce_exist, BoundKind,
    MeanGap, SampleBound,
};

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::verify::{verify_cce, verify_ce, VerifyReport};
use crate::{invalid, Game, JointDistribution, KUniformMultiset, Result, LP_TOL, PROB_TOL};

pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub max_attempts: usize,
    /// Replaces the closed-form `k` when set.
    pub k_override: Option<usize>,
}

impl SparsifyConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        SparsifyConfig {
            epsilon,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            k_override: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k_override = Some(k);
        self
    }

    pub fn with_max_attempts(mut self, attempts: usize) -> Self {
        self.max_attempts = attempts;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyOutcome {
    /// The accepted draw, or the last one when every attempt failed.
    pub multiset: KUniformMultiset,
    pub attempts: usize,
    pub verified: bool,
    pub worst_value: f64,
    pub k: usize,
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix64(seed + attempt · 0x9E3779B97F4A7C15)`.
pub fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    mix64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// `k` i.i.d. profiles from `x`, using a ChaCha8 stream seeded with `seed`
/// and `x`'s support in increasing flat-index order.
pub fn sample_k_uniform(game: &Game, x: &JointDistribution, k: usize, seed: u64) -> Result<KUniformMultiset> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if x.shape() != (game.num_players(), game.num_actions()) {
        return invalid("distribution does not belong to this game");
    }
    let (indices, weights): (Vec<usize>, Vec<f64>) = x.entries().unzip();
    let dist = WeightedIndex::new(&weights).map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..k).map(|_| indices[dist.sample(&mut rng)]).collect();
    KUniformMultiset::new(game, samples)
}

fn retry(
    game: &Game,
    sigma: &JointDistribution,
    k: usize,
    cfg: &SparsifyConfig,
    check: impl Fn(&KUniformMultiset) -> Result<VerifyReport>,
) -> Result<SparsifyOutcome> {
    if cfg.max_attempts == 0 {
        return invalid("max_attempts must be at least 1");
    }
    let mut last = None;
    for attempt in 1..=cfg.max_attempts {
        let multiset = sample_k_uniform(game, sigma, k, attempt_seed(cfg.seed, attempt))?;
        let report = check(&multiset)?;
        let outcome = SparsifyOutcome {
            multiset,
            attempts: attempt,
            verified: report.satisfied,
            worst_value: report.worst_value,
            k,
        };
        if outcome.verified {
            return Ok(outcome);
        }
        last = Some(outcome);
    }
    Ok(last.expect("at least one attempt"))
}

fn resolve_k(cfg: &SparsifyConfig, bound: u64) -> Result<usize> {
    let k = match cfg.k_override {
        Some(k) => k,
        None => usize::try_from(bound).map_err(|_| crate::Error::InvalidArgument("k does not fit in memory".into()))?,
    };
    if k == 0 {
        return invalid("k must be at least 1");
    }
    Ok(k)
}

/// Samples from an exact CCE until the empirical distribution is an ε-CCE,
/// with `k = k_bound_cce_alg(n, m, ε)` unless overridden.
pub fn sparsify_cce(game: &Game, sigma: &JointDistribution, cfg: &SparsifyConfig) -> Result<SparsifyOutcome> {
    let bound = k_bound_cce_alg(game.num_players(), game.num_actions(), cfg.epsilon)?;
    let pre = verify_cce(game, sigma, LP_TOL)?;
    if !pre.satisfied {
        return invalid(format!("seed is not an exact CCE (worst regret {:.3e})", pre.worst_value));
    }
    let k = resolve_k(cfg, bound)?;
    retry(game, sigma, k, cfg, |s| verify_cce(game, s, cfg.epsilon))
}

/// Samples from an exact CE until the empirical distribution is an ε-CE,
/// with `k = k_bound_ce_alg(n, m, ε)` unless overridden.
pub fn sparsify_ce(game: &Game, sigma: &JointDistribution, cfg: &SparsifyConfig) -> Result<SparsifyOutcome> {
    let bound = k_bound_ce_alg(game.num_players(), game.num_actions(), cfg.epsilon)?;
    let pre = verify_ce(game, sigma, LP_TOL)?;
    if !pre.satisfied {
        return invalid(format!("seed is not an exact CE (worst regret {:.3e})", pre.worst_value));
    }
    let k = resolve_k(cfg, bound)?;
    retry(game, sigma, k, cfg, |s| verify_ce(game, s, cfg.epsilon))
}

/// Samples from a product ε/2-equilibrium whose per-player supports have at
/// most `b` actions, with `k` from the CE existence bound unless overridden.
///
/// Only rules on each player's support matter: the verifier maps actions that
/// are never recommended to themselves.
pub fn sparsify_ce_from_small_support(
    game: &Game,
    sigma: &JointDistribution,
    cfg: &SparsifyConfig,
) -> Result<SparsifyOutcome> {
    let (bound_k, b) = k_bound_ce_exist(game.num_players(), game.num_actions(), cfg.epsilon)?;
    if !sigma.is_product(game, PROB_TOL) {
        return invalid("seed must be a product distribution");
    }
    for i in 0..game.num_players() {
        let support = sigma.marginal(game, i).support_size() as u64;
        if support > b {
            return invalid(format!("player {} uses {} actions, more than b = {}", i + 1, support, b));
        }
    }
    let pre = verify_ce(game, sigma, cfg.epsilon / 2.0)?;
    if !pre.satisfied {
        return invalid(format!(
            "seed is not an ε/2-CE (worst regret {:.3e} > {})",
            pre.worst_value,
            cfg.epsilon / 2.0
        ));
    }
    let k = resolve_k(cfg, bound_k)?;
    retry(game, sigma, k, cfg, |s| verify_ce(game, s, cfg.epsilon))
}
