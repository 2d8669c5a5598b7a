//! ε-CCE and ε-CE checks with violating witnesses.
//!
//! All checks go through the per-player gain table
//! `G_i[a][j] = Σ_{a_{-i}} (u_i(j, a_{-i}) - u_i(a, a_{-i})) x(a, a_{-i})`,
//! i.e. the expected gain of switching recommendation `a` to `j`. CCE regrets
//! are its column sums, single-switch regrets its entries, and the best
//! switching rule picks a row-wise argmax.

use serde::{Deserialize, Serialize};

use crate::distribution::{check_measure, ProfileMeasure};
use crate::regret::{action_regret_at, expected_regret, Deviation, SwitchingRule};
use crate::{Error, Game, Result, VERIFY_SLACK};

/// 6^6 rules per player.
pub const DEFAULT_MAX_RULES: u128 = 46_656;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    Cce,
    CeRule,
    CeSingleSwitch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Action { player: usize, action: usize },
    Rule(SwitchingRule),
    SingleSwitch { player: usize, from: usize, to: usize },
}

impl Witness {
    pub fn player(&self) -> usize {
        match self {
            Witness::Action { player, .. } | Witness::SingleSwitch { player, .. } => *player,
            Witness::Rule(r) => r.player,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub satisfied: bool,
    /// Largest expected regret found, reported whether or not it is within ε.
    pub worst_value: f64,
    /// The maximising deviation, present only when the check fails.
    pub witness: Option<Witness>,
    pub definition: Definition,
}

impl VerifyReport {
    fn new(definition: Definition, epsilon: f64, worst_value: f64, witness: Option<Witness>) -> Self {
        let satisfied = worst_value <= epsilon + VERIFY_SLACK;
        VerifyReport {
            satisfied,
            worst_value,
            witness: if satisfied { None } else { witness },
            definition,
        }
    }
}

/// `gains[i][a * m + j]`, plus the mass each player's recommendation `a` receives.
struct GainTable {
    m: usize,
    gains: Vec<Vec<f64>>,
    mass: Vec<Vec<f64>>,
}

impl GainTable {
    fn build(game: &Game, x: &dyn ProfileMeasure) -> Result<Self> {
        check_measure(game, x)?;
        let (n, m) = (game.num_players(), game.num_actions());
        let mut gains = vec![vec![0.0; m * m]; n];
        let mut mass = vec![vec![0.0; m]; n];
        x.for_each_weighted(&mut |idx, w| {
            for i in 0..n {
                let a = game.action_of(idx, i);
                mass[i][a] += w;
                let row = &mut gains[i][a * m..(a + 1) * m];
                for (j, g) in row.iter_mut().enumerate() {
                    *g += w * action_regret_at(game, idx, i, j);
                }
            }
        });
        Ok(GainTable { m, gains, mass })
    }

    fn gain(&self, player: usize, from: usize, to: usize) -> f64 {
        self.gains[player][from * self.m + to]
    }

    fn best_rule(&self, player: usize) -> SwitchingRule {
        let map = (0..self.m)
            .map(|a| {
                if self.mass[player][a] <= 0.0 {
                    return a;
                }
                let mut best = 0;
                for j in 1..self.m {
                    if self.gain(player, a, j) > self.gain(player, a, best) {
                        best = j;
                    }
                }
                best
            })
            .collect();
        SwitchingRule { player, map }
    }
}

/// Checks `E_x[R^i_j] <= ε` for all `n·m` pairs `(i, j)`.
pub fn verify_cce(game: &Game, x: &dyn ProfileMeasure, epsilon: f64) -> Result<VerifyReport> {
    let table = GainTable::build(game, x)?;
    let m = game.num_actions();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..game.num_players() {
        for j in 0..m {
            let value: f64 = (0..m).map(|a| table.gain(i, a, j)).sum();
            if value > worst {
                worst = value;
                witness = Some(Witness::Action { player: i, action: j });
            }
        }
    }
    Ok(VerifyReport::new(Definition::Cce, epsilon, worst, witness))
}

/// The switching rule maximising player `i`'s expected regret under `x`.
///
/// Each recommended action maps to the action with the largest expected gain
/// against the recommendations it co-occurs with (smallest index on ties);
/// actions that are never recommended map to themselves.
pub fn best_switching_rule(game: &Game, x: &dyn ProfileMeasure, player: usize) -> Result<SwitchingRule> {
    game.check_player(player)?;
    Ok(GainTable::build(game, x)?.best_rule(player))
}

/// Checks `E_x[R^i_f] <= ε` for every player and every `f: A_i -> A_i` by
/// evaluating only each player's best rule.
pub fn verify_ce(game: &Game, x: &dyn ProfileMeasure, epsilon: f64) -> Result<VerifyReport> {
    let table = GainTable::build(game, x)?;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..game.num_players() {
        let rule = table.best_rule(i);
        let value = expected_regret(game, i, &Deviation::Rule(rule.clone()), x)?;
        if value > worst {
            worst = value;
            witness = Some(Witness::Rule(rule));
        }
    }
    Ok(VerifyReport::new(Definition::CeRule, epsilon, worst, witness))
}

/// Checks the `n·m(m-1)` single-recommendation inequalities
/// `Σ_{a_{-i}} (u_i(j, a_{-i}) - u_i(a_i, a_{-i})) x(a_i, a_{-i}) <= ε`.
pub fn verify_ce_single_switch(game: &Game, x: &dyn ProfileMeasure, epsilon: f64) -> Result<VerifyReport> {
    let table = GainTable::build(game, x)?;
    let m = game.num_actions();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..game.num_players() {
        for from in 0..m {
            for to in (0..m).filter(|&t| t != from) {
                let value = table.gain(i, from, to);
                if value > worst {
                    worst = value;
                    witness = Some(Witness::SingleSwitch { player: i, from, to });
                }
            }
        }
    }
    if witness.is_none() {
        worst = 0.0;
    }
    Ok(VerifyReport::new(Definition::CeSingleSwitch, epsilon, worst, witness))
}

/// Exhaustive ε-CE check over all `m^m` rules per player. Refuses when
/// `m^m > max_rules`.
pub fn brute_force_verify_ce(game: &Game, x: &dyn ProfileMeasure, epsilon: f64, max_rules: u128) -> Result<VerifyReport> {
    check_measure(game, x)?;
    let m = game.num_actions();
    let rules = (m as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if rules > max_rules {
        return Err(Error::BudgetExceeded {
            what: "switching-rule enumeration",
            required: rules,
            limit: max_rules,
        });
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 0..game.num_players() {
        let mut map = vec![0usize; m];
        loop {
            let rule = SwitchingRule { player: i, map: map.clone() };
            let value = expected_regret(game, i, &Deviation::Rule(rule.clone()), x)?;
            if value > worst {
                worst = value;
                witness = Some(Witness::Rule(rule));
            }
            if !crate::game::advance(&mut map, m) {
                break;
            }
        }
    }
    Ok(VerifyReport::new(Definition::CeRule, epsilon, worst, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamegen::{figure1, matching_game, rps};
    use crate::{ActionProfile, Budget, JointDistribution, KUniformMultiset};

    #[test]
    fn uniform_matching_pennies_is_an_exact_cce() {
        let g = figure1(1.0).unwrap();
        let x = JointDistribution::uniform(&g, g.profiles()).unwrap();
        let r = verify_cce(&g, &x, 0.0).unwrap();
        assert!(r.satisfied);
        assert!(r.witness.is_none());
        assert_eq!(r.definition, Definition::Cce);
    }

    #[test]
    fn point_mass_on_a_match_fails_with_player_two_witness() {
        let g = matching_game(2).unwrap();
        let x = JointDistribution::point_mass(&g, &ActionProfile::new(vec![0, 0])).unwrap();
        let r = verify_cce(&g, &x, 0.0).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.worst_value, 1.0);
        assert_eq!(r.witness, Some(Witness::Action { player: 1, action: 1 }));
        let f = best_switching_rule(&g, &x, 1).unwrap();
        assert_eq!(f.map, vec![1, 1]);
        assert!(verify_cce(&g, &x, 2.0).unwrap().satisfied);
    }

    #[test]
    fn uniform_rps_is_an_exact_ce() {
        let g = rps(3).unwrap();
        let x = JointDistribution::uniform(&g, g.profiles()).unwrap();
        let r = verify_ce(&g, &x, 0.0).unwrap();
        assert!(r.satisfied, "{:?}", r);
        assert!(verify_ce_single_switch(&g, &x, 0.0).unwrap().satisfied);
    }

    #[test]
    fn pure_nash_point_mass_is_a_ce() {
        // coordination game: (1,1) and (2,2) are pure equilibria
        let g = Game::new("coord", 2, 2, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let x = JointDistribution::point_mass(&g, &ActionProfile::new(vec![1, 1])).unwrap();
        assert!(verify_ce(&g, &x, 0.0).unwrap().satisfied);
        let bad = JointDistribution::point_mass(&g, &ActionProfile::new(vec![0, 1])).unwrap();
        assert!(!verify_ce_single_switch(&g, &bad, 0.0).unwrap().satisfied);
        assert!(!verify_ce(&g, &bad, 0.0).unwrap().satisfied);
    }

    #[test]
    fn diagonal_is_a_one_over_k_single_switch_equilibrium_for_any_payoffs() {
        let k = 10;
        for seed in 0..5 {
            let g = crate::gamegen::random_game(2, 12, seed, &Budget::default()).unwrap();
            let x = JointDistribution::uniform(&g, (0..k).map(|j| g.index_of(&[j, j]))).unwrap();
            let r = verify_ce_single_switch(&g, &x, 1.0 / k as f64).unwrap();
            assert!(r.satisfied, "{:?}", r);
        }
    }

    #[test]
    fn unrecommended_actions_map_to_themselves() {
        let g = rps(5).unwrap();
        let x = JointDistribution::uniform(&g, [g.index_of(&[1, 0]), g.index_of(&[3, 2])]).unwrap();
        let f = best_switching_rule(&g, &x, 0).unwrap();
        for a in [0, 2, 4] {
            assert_eq!(f.map[a], a);
        }
    }

    #[test]
    fn constant_game_and_single_action_are_always_equilibria() {
        let g = Game::new("flat", 2, 3, vec![0.4; 18]).unwrap();
        let x = JointDistribution::uniform(&g, [0, 5, 7]).unwrap();
        assert!(brute_force_verify_ce(&g, &x, 0.0, DEFAULT_MAX_RULES).unwrap().satisfied);
        let one = Game::new("one", 3, 1, vec![0.1, 0.9, 0.3]).unwrap();
        let x1 = JointDistribution::uniform(&one, [0]).unwrap();
        assert!(brute_force_verify_ce(&one, &x1, 0.0, DEFAULT_MAX_RULES).unwrap().satisfied);
        assert!(verify_ce_single_switch(&one, &x1, 0.0).unwrap().satisfied);
    }

    #[test]
    fn brute_force_refuses_over_cap() {
        let g = rps(7).unwrap();
        let x = JointDistribution::uniform(&g, g.profiles()).unwrap();
        assert!(matches!(
            brute_force_verify_ce(&g, &x, 0.0, DEFAULT_MAX_RULES),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn multisets_are_verified_as_their_empirical_distribution() {
        let g = rps(3).unwrap();
        let s = KUniformMultiset::new(&g, vec![0, 4, 4, 8, 1]).unwrap();
        let d = s.to_distribution(&g).unwrap();
        let a = verify_ce(&g, &s, 0.0).unwrap().worst_value;
        let b = verify_ce(&g, &d, 0.0).unwrap().worst_value;
        assert!((a - b).abs() < 1e-12);
    }
}
