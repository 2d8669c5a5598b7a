//! Regret of a deviation at a profile and in expectation.

use std::fmt;

use crate::distribution::{check_measure, ProfileMeasure};
use crate::game::{ActionProfile, Game};
use crate::{invalid, Result};

/// A map `f: A_i -> A_i` applied by one player to her recommendation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingRule {
    pub player: usize,
    pub map: Vec<usize>,
}

impl SwitchingRule {
    pub fn new(game: &Game, player: usize, map: Vec<usize>) -> Result<Self> {
        game.check_player(player)?;
        if map.len() != game.num_actions() {
            return invalid(format!("switching rule has {} entries, m = {}", map.len(), game.num_actions()));
        }
        for &a in &map {
            game.check_action(a)?;
        }
        Ok(SwitchingRule { player, map })
    }

    pub fn identity(player: usize, m: usize) -> Self {
        SwitchingRule { player, map: (0..m).collect() }
    }

    pub fn constant(player: usize, m: usize, target: usize) -> Self {
        SwitchingRule { player, map: vec![target; m] }
    }

    #[inline]
    pub fn apply(&self, action: usize) -> usize {
        self.map[action]
    }
}

impl fmt::Display for SwitchingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}: ", self.player + 1)?;
        for (from, to) in self.map.iter().enumerate() {
            if from > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", from + 1, to + 1)?;
        }
        Ok(())
    }
}

/// What a player deviates to: a fixed action (CCE) or a switching rule (CE).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deviation {
    Action(usize),
    Rule(SwitchingRule),
}

/// `R^i_j(a) = u_i(j, a_{-i}) - u_i(a)` on a flat index, unchecked.
#[inline]
pub(crate) fn action_regret_at(game: &Game, index: usize, player: usize, action: usize) -> f64 {
    game.utility(game.deviate(index, player, action), player) - game.utility(index, player)
}

pub fn regret_action(game: &Game, player: usize, action: usize, profile: &ActionProfile) -> Result<f64> {
    game.check_player(player)?;
    game.check_action(action)?;
    let idx = game.check_profile(profile)?;
    Ok(action_regret_at(game, idx, player, action))
}

/// `R^i_f(a) = u_i(f(a_i), a_{-i}) - u_i(a)`.
pub fn regret_rule(game: &Game, player: usize, rule: &SwitchingRule, profile: &ActionProfile) -> Result<f64> {
    if rule.player != player {
        return invalid(format!("rule belongs to player {}, not {}", rule.player, player));
    }
    let rule = SwitchingRule::new(game, player, rule.map.clone())?;
    let idx = game.check_profile(profile)?;
    Ok(action_regret_at(game, idx, player, rule.apply(profile.action(player))))
}

fn check_deviation(game: &Game, player: usize, deviation: &Deviation) -> Result<()> {
    game.check_player(player)?;
    match deviation {
        Deviation::Action(j) => game.check_action(*j),
        Deviation::Rule(rule) => {
            if rule.player != player {
                return invalid(format!("rule belongs to player {}, not {}", rule.player, player));
            }
            SwitchingRule::new(game, player, rule.map.clone()).map(|_| ())
        }
    }
}

/// `E_{a~x}[R(a)]`; for a multiset this is the mean over the samples.
pub fn expected_regret(game: &Game, player: usize, deviation: &Deviation, x: &dyn ProfileMeasure) -> Result<f64> {
    check_deviation(game, player, deviation)?;
    check_measure(game, x)?;
    let mut total = 0.0;
    x.for_each_weighted(&mut |idx, w| {
        let target = match deviation {
            Deviation::Action(j) => *j,
            Deviation::Rule(rule) => rule.apply(game.action_of(idx, player)),
        };
        total += w * action_regret_at(game, idx, player, target);
    });
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamegen::{figure1, matching_game};
    use crate::{Budget, JointDistribution};

    fn p(v: &[usize]) -> ActionProfile {
        ActionProfile::new(v.to_vec())
    }

    #[test]
    fn matching_game_regrets() {
        let g = matching_game(2).unwrap();
        // 1-based (1,1): player one matched
        assert_eq!(g.payoff(0, &p(&[0, 0])).unwrap(), 1.0);
        assert_eq!(regret_action(&g, 0, 1, &p(&[0, 0])).unwrap(), -1.0);
        let swap = SwitchingRule::new(&g, 1, vec![1, 0]).unwrap();
        assert_eq!(regret_rule(&g, 1, &swap, &p(&[0, 0])).unwrap(), 1.0);
    }

    #[test]
    fn figure1_regrets() {
        let g = figure1(1.0).unwrap();
        assert_eq!(g.payoff(0, &p(&[1, 1])).unwrap(), 1.0);
        // player two at (2,2) gets raw -1; switching to column 1 gives raw 0
        assert_eq!(regret_action(&g, 1, 0, &p(&[1, 1])).unwrap(), 0.5);
    }

    #[test]
    fn rule_player_mismatch_is_an_error() {
        let g = matching_game(2).unwrap();
        let r = SwitchingRule::identity(0, 2);
        assert!(regret_rule(&g, 1, &r, &p(&[0, 0])).is_err());
        assert!(regret_action(&g, 0, 2, &p(&[0, 0])).is_err());
    }

    #[test]
    fn uniform_matching_pennies_has_zero_expected_regret() {
        let g = figure1(1.0).unwrap();
        let x = JointDistribution::uniform(&g, g.profiles()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(expected_regret(&g, i, &Deviation::Action(j), &x).unwrap().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn point_mass_expectation_is_the_pointwise_regret() {
        let g = Game::from_fn("r", 3, 3, &Budget::default(), |a, i| ((a[0] * 7 + a[1] * 3 + a[2] + i * 5) % 11) as f64 / 10.0).unwrap();
        for idx in g.profiles() {
            let prof = g.profile_at(idx);
            let x = JointDistribution::point_mass(&g, &prof).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let e = expected_regret(&g, i, &Deviation::Action(j), &x).unwrap();
                    assert_eq!(e, regret_action(&g, i, j, &prof).unwrap());
                }
            }
        }
    }
}
