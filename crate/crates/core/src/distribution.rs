use std::collections::BTreeMap;

use crate::game::{ActionProfile, Game};
use crate::{invalid, Result, PROB_TOL};

/// Anything that assigns weights to profiles of a game: exact distributions
/// and k-uniform multisets.
pub trait ProfileMeasure {
    /// `(num_players, num_actions)` of the game the measure lives on.
    fn shape(&self) -> (usize, usize);

    /// Calls `f(profile_index, weight)` for every weighted profile. Weights sum to 1.
    fn for_each_weighted(&self, f: &mut dyn FnMut(usize, f64));
}

fn check_shape(game: &Game, shape: (usize, usize)) -> Result<()> {
    if shape != (game.num_players(), game.num_actions()) {
        return invalid(format!(
            "measure has shape (n={}, m={}) but game has (n={}, m={})",
            shape.0,
            shape.1,
            game.num_players(),
            game.num_actions()
        ));
    }
    Ok(())
}

pub(crate) fn check_measure(game: &Game, x: &dyn ProfileMeasure) -> Result<()> {
    check_shape(game, x.shape())
}

/// Sparse probability distribution over action profiles, keyed by flat index.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    num_players: usize,
    num_actions: usize,
    masses: BTreeMap<usize, f64>,
}

impl JointDistribution {
    /// Builds a distribution from `(flat index, mass)` pairs. Zero masses are
    /// dropped, repeated indices accumulate.
    pub fn from_masses(game: &Game, masses: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, p) in masses {
            if idx >= game.num_profiles() {
                return invalid(format!("profile index {} out of range", idx));
            }
            if !(p >= 0.0) || !p.is_finite() {
                return invalid(format!("mass {} is not a nonnegative number", p));
            }
            if p > 0.0 {
                *map.entry(idx).or_insert(0.0) += p;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return invalid(format!("masses sum to {}, not 1", total));
        }
        Ok(JointDistribution {
            num_players: game.num_players(),
            num_actions: game.num_actions(),
            masses: map,
        })
    }

    pub fn from_profiles(game: &Game, entries: impl IntoIterator<Item = (ActionProfile, f64)>) -> Result<Self> {
        let mut flat = Vec::new();
        for (profile, p) in entries {
            flat.push((game.check_profile(&profile)?, p));
        }
        JointDistribution::from_masses(game, flat)
    }

    /// Drops masses at or below `threshold`, clamps negatives, and rescales to
    /// sum 1. Used to turn numerical LP output into a clean distribution.
    pub fn from_noisy(game: &Game, weights: &[(usize, f64)], threshold: f64) -> Result<Self> {
        let kept: Vec<(usize, f64)> = weights.iter().copied().filter(|&(_, w)| w > threshold).collect();
        let total: f64 = kept.iter().map(|&(_, w)| w).sum();
        if total <= 0.0 {
            return invalid("no positive mass left after cleaning");
        }
        JointDistribution::from_masses(game, kept.into_iter().map(|(i, w)| (i, w / total)))
    }

    pub fn point_mass(game: &Game, profile: &ActionProfile) -> Result<Self> {
        let idx = game.check_profile(profile)?;
        JointDistribution::from_masses(game, [(idx, 1.0)])
    }

    /// Uniform over the distinct flat indices given.
    pub fn uniform(game: &Game, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set: Vec<usize> = indices.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return invalid("uniform distribution over an empty set");
        }
        let p = 1.0 / set.len() as f64;
        JointDistribution::from_masses(game, set.into_iter().map(|i| (i, p)))
    }

    /// Product of one mixed strategy per player, in player order.
    pub fn product(game: &Game, strategies: &[MixedStrategy]) -> Result<Self> {
        if strategies.len() != game.num_players() {
            return invalid("product needs one strategy per player");
        }
        for (i, s) in strategies.iter().enumerate() {
            if s.player != i || s.probs.len() != game.num_actions() {
                return invalid(format!("strategy {} does not match player {}", s.player, i));
            }
        }
        let mut masses = vec![(0usize, 1.0f64)];
        for (i, s) in strategies.iter().enumerate() {
            let stride = game.index_of(&unit(game.num_players(), i));
            let mut next = Vec::with_capacity(masses.len() * s.support_size());
            for &(idx, p) in &masses {
                for a in s.support() {
                    next.push((idx + a * stride, p * s.probs[a]));
                }
            }
            masses = next;
        }
        JointDistribution::from_masses(game, masses)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.num_players, self.num_actions)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.masses.iter().map(|(&i, &p)| (i, p))
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.masses.get(&index).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.masses.keys().copied()
    }

    /// Marginal distribution of one player's recommendation.
    pub fn marginal(&self, game: &Game, player: usize) -> MixedStrategy {
        let mut probs = vec![0.0; self.num_actions];
        for (idx, p) in self.entries() {
            probs[game.action_of(idx, player)] += p;
        }
        MixedStrategy { player, probs }
    }

    /// Distribution of `of_player`'s action conditional on `given_player`
    /// playing `given_action`; `None` when that action has zero mass.
    pub fn conditional(&self, game: &Game, given_player: usize, given_action: usize, of_player: usize) -> Option<MixedStrategy> {
        let mut probs = vec![0.0; self.num_actions];
        let mut total = 0.0;
        for (idx, p) in self.entries() {
            if game.action_of(idx, given_player) == given_action {
                probs[game.action_of(idx, of_player)] += p;
                total += p;
            }
        }
        if total <= 0.0 {
            return None;
        }
        probs.iter_mut().for_each(|q| *q /= total);
        Some(MixedStrategy { player: of_player, probs })
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, game: &Game, other: &JointDistribution, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return invalid("mixing weight must lie in [0, 1]");
        }
        JointDistribution::from_masses(
            game,
            self.entries()
                .map(|(i, p)| (i, lambda * p))
                .chain(other.entries().map(|(i, p)| (i, (1.0 - lambda) * p))),
        )
    }

    /// Whether the distribution equals the product of its marginals within `tol`.
    pub fn is_product(&self, game: &Game, tol: f64) -> bool {
        let marginals: Vec<MixedStrategy> = (0..game.num_players()).map(|i| self.marginal(game, i)).collect();
        match JointDistribution::product(game, &marginals) {
            Ok(prod) => {
                prod.support_size() == self.support_size()
                    && prod.entries().all(|(i, p)| (self.prob(i) - p).abs() <= tol)
            }
            Err(_) => false,
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

impl ProfileMeasure for JointDistribution {
    fn shape(&self) -> (usize, usize) {
        (self.num_players, self.num_actions)
    }

    fn for_each_weighted(&self, f: &mut dyn FnMut(usize, f64)) {
        for (&i, &p) in &self.masses {
            f(i, p);
        }
    }
}

/// Uniform distribution over a size-k multiset of profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KUniformMultiset {
    num_players: usize,
    num_actions: usize,
    samples: Vec<usize>,
}

impl KUniformMultiset {
    pub fn new(game: &Game, samples: Vec<usize>) -> Result<Self> {
        if samples.is_empty() {
            return invalid("a k-uniform multiset needs k >= 1");
        }
        if let Some(bad) = samples.iter().find(|&&s| s >= game.num_profiles()) {
            return invalid(format!("profile index {} out of range", bad));
        }
        Ok(KUniformMultiset {
            num_players: game.num_players(),
            num_actions: game.num_actions(),
            samples,
        })
    }

    pub fn k(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[usize] {
        &self.samples
    }

    /// Each distinct profile gets mass multiplicity / k.
    pub fn to_distribution(&self, game: &Game) -> Result<JointDistribution> {
        let w = 1.0 / self.k() as f64;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &s in &self.samples {
            *counts.entry(s).or_insert(0) += 1;
        }
        JointDistribution::from_masses(game, counts.into_iter().map(|(i, c)| (i, c as f64 * w)))
    }

    pub fn support_size(&self) -> usize {
        let mut v = self.samples.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }
}

impl ProfileMeasure for KUniformMultiset {
    fn shape(&self) -> (usize, usize) {
        (self.num_players, self.num_actions)
    }

    fn for_each_weighted(&self, f: &mut dyn FnMut(usize, f64)) {
        let w = 1.0 / self.samples.len() as f64;
        for &s in &self.samples {
            f(s, w);
        }
    }
}

/// A single player's distribution over her own actions. Its support is `B_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    pub player: usize,
    pub probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(player: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("mixed strategy over no actions");
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return invalid("mixed strategy has a negative or non-finite entry");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return invalid(format!("mixed strategy sums to {}, not 1", total));
        }
        Ok(MixedStrategy { player, probs })
    }

    pub fn uniform(player: usize, m: usize) -> Self {
        MixedStrategy { player, probs: vec![1.0 / m as f64; m] }
    }

    pub fn pure(player: usize, m: usize, action: usize) -> Self {
        let mut probs = vec![0.0; m];
        probs[action] = 1.0;
        MixedStrategy { player, probs }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(a, _)| a)
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }
}
