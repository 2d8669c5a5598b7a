//! Game constructions: the 2x2 unique-CE game and its chained version, the
//! matching game, cyclic rock-paper-scissors, matching pennies with dummy
//! labels, random games, and the X3C reduction.
//!
//! Raw zero-sum payoffs are mapped affinely into `[0, 1]`; the map is written
//! into each game's label as `norm=...`. For the `±1` games (rps, dummy
//! pennies, x3c) the map is `(u+1)/2`, so a raw gain `g` is a normalized gain
//! `g/2`.

mod partial_sums;
mod x3c;

pub use partial_sums::min_partial_sum_generators;
pub use x3c::{x3c_reduce, X3CInstance};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, Budget, Game, JointDistribution, Result};

fn figure1_raw(v: f64, row: usize, col: usize) -> f64 {
    match (row, col) {
        (0, 0) => v,
        (1, 1) => 1.0,
        _ => 0.0,
    }
}

/// The 2x2 zero-sum game with cells `(v,-v) (0,0) / (0,0) (1,-1)`, mapped by
/// `u -> (u + v') / (2v')` with `v' = max(v, 1)`.
///
/// Its unique correlated equilibrium is the product of `(1/(v+1), v/(v+1))`
/// for both players.
pub fn figure1(v: f64) -> Result<Game> {
    if !(v > 0.0) || !v.is_finite() {
        return invalid("figure1 needs v > 0");
    }
    let scale = v.max(1.0);
    Game::from_fn(
        format!("figure1 v={} norm=(u+{})/{}", v, scale, 2.0 * scale),
        2,
        2,
        &Budget::default(),
        |a, i| {
            let raw = figure1_raw(v, a[0], a[1]);
            let raw = if i == 0 { raw } else { -raw };
            (raw + scale) / (2.0 * scale)
        },
    )
}

/// Cell masses of the unique CE of [`figure1`]: `v^(r+c) / (v+1)^2`.
pub fn figure1_equilibrium(game: &Game, v: f64) -> Result<JointDistribution> {
    let d = (v + 1.0) * (v + 1.0);
    JointDistribution::from_masses(
        game,
        [(0, 1.0 / d), (1, v / d), (2, v / d), (3, v * v / d)],
    )
}

/// `pairs` independent copies of [`figure1`] with `v_i = 2^i - 1`, players
/// ordered `R_1, C_1, R_2, C_2, ...`.
pub fn scaled_pennies_chain(pairs: usize, budget: &Budget) -> Result<Game> {
    if pairs == 0 {
        return invalid("chain needs at least one pair");
    }
    if pairs > 30 {
        return invalid("chain parameter too large");
    }
    let values: Vec<f64> = (1..=pairs).map(|i| ((1u64 << i) - 1) as f64).collect();
    Game::from_fn(
        format!("chain pairs={} v_i=2^i-1 norm=(u+v_i)/(2v_i)", pairs),
        2 * pairs,
        2,
        budget,
        |a, player| {
            let pair = player / 2;
            let v = values[pair];
            let raw = figure1_raw(v, a[2 * pair], a[2 * pair + 1]);
            let raw = if player % 2 == 0 { raw } else { -raw };
            (raw + v) / (2.0 * v)
        },
    )
}

/// Player one scores 1 on a match; player two gets `1 - u_1`.
pub fn matching_game(m: usize) -> Result<Game> {
    if m < 2 {
        return invalid("matching game needs m >= 2");
    }
    Game::from_fn(
        format!("matching m={} norm=u1:u,u2:u+1", m),
        2,
        m,
        &Budget::default(),
        |a, i| {
            let matched = if a[0] == a[1] { 1.0 } else { 0.0 };
            if i == 0 {
                matched
            } else {
                1.0 - matched
            }
        },
    )
}

/// Cyclic rock-paper-scissors: action `j` beats the `(m-1)/2` actions that
/// precede it cyclically.
pub fn rps(m: usize) -> Result<Game> {
    if m < 3 || m.is_multiple_of(2) {
        return invalid("rps needs an odd m >= 3");
    }
    let half = (m - 1) / 2;
    Game::from_fn(format!("rps m={} norm=(u+1)/2", m), 2, m, &Budget::default(), |a, i| {
        let diff = (a[0] + m - a[1]) % m;
        let raw = if diff == 0 {
            0.0
        } else if diff <= half {
            1.0
        } else {
            -1.0
        };
        let raw = if i == 0 { raw } else { -raw };
        (raw + 1.0) / 2.0
    })
}

/// Action index of the dummy-pennies action `(r, d)` where `r = 0` stands for
/// the real action `+1` and `r = 1` for `-1`.
pub fn dummy_action(sign: usize, label: usize) -> usize {
    2 * label + sign
}

/// Matching pennies where each player also names a payoff-irrelevant label
/// `d in [m]`, together with the exact CE that draws a shared `d` uniformly
/// and both signs independently.
pub fn dummy_pennies(m: usize) -> Result<(Game, JointDistribution)> {
    if m == 0 {
        return invalid("dummy pennies needs m >= 1");
    }
    let game = Game::from_fn(
        format!("dummy-pennies m={} norm=(u+1)/2", m),
        2,
        2 * m,
        &Budget::default(),
        |a, i| {
            let same_sign = a[0] % 2 == a[1] % 2;
            let u1 = if same_sign { 1.0 } else { 0.0 };
            if i == 0 {
                u1
            } else {
                1.0 - u1
            }
        },
    )?;
    let p = 1.0 / (4 * m) as f64;
    let mut masses = Vec::with_capacity(4 * m);
    for d in 0..m {
        for r1 in 0..2 {
            for r2 in 0..2 {
                masses.push((game.index_of(&[dummy_action(r1, d), dummy_action(r2, d)]), p));
            }
        }
    }
    let ce = JointDistribution::from_masses(&game, masses)?;
    Ok((game, ce))
}

/// I.i.d. uniform payoffs from a ChaCha8 stream seeded with `seed`, drawn in
/// storage order.
pub fn random_game(n: usize, m: usize, seed: u64, budget: &Budget) -> Result<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Game::from_fn(format!("random n={} m={} seed={}", n, m, seed), n, m, budget, |_, _| rng.gen::<f64>())
}

/// Two-player constant-sum game: `u_1` uniform, `u_2 = 1 - u_1`.
pub fn random_zero_sum(m: usize, seed: u64) -> Result<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u1 = 0.0;
    Game::from_fn(format!("random-zero-sum m={} seed={}", m, seed), 2, m, &Budget::default(), |_, i| {
        if i == 0 {
            u1 = rng.gen::<f64>();
            u1
        } else {
            1.0 - u1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_ce;

    #[test]
    fn figure1_payoffs_and_label() {
        let g = figure1(1.0).unwrap();
        assert_eq!(g.payoffs(), &[1.0, 0.0, 0.5, 0.5, 0.5, 0.5, 1.0, 0.0]);
        let g3 = figure1(3.0).unwrap();
        assert!(g3.label().contains("v=3"));
        assert!((g3.utility(0, 0) - 1.0).abs() < 1e-15);
        assert!((g3.utility(3, 0) - 4.0 / 6.0).abs() < 1e-15);
        assert!(figure1(0.0).is_err());
        assert!(figure1(-1.0).is_err());
    }

    #[test]
    fn figure1_table_is_an_exact_ce() {
        for v in [1.0, 3.0, 7.0] {
            let g = figure1(v).unwrap();
            let x = figure1_equilibrium(&g, v).unwrap();
            let r = verify_ce(&g, &x, 0.0).unwrap();
            assert!(r.worst_value.abs() < 1e-9, "v={} worst={}", v, r.worst_value);
            let row = x.marginal(&g, 0);
            assert!((row.probs[0] - 1.0 / (v + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_pair_payoffs_ignore_other_pairs() {
        let g = scaled_pennies_chain(2, &Budget::default()).unwrap();
        assert_eq!(g.num_players(), 4);
        let pair_game = [figure1(1.0).unwrap(), figure1(3.0).unwrap()];
        for idx in g.profiles() {
            let a = g.profile_at(idx);
            for player in 0..4 {
                let pair = player / 2;
                let local = pair_game[pair].index_of(&[a.action(2 * pair), a.action(2 * pair + 1)]);
                let expected = pair_game[pair].utility(local, player % 2);
                assert!((g.utility(idx, player) - expected).abs() < 1e-15);
            }
        }
        assert!(scaled_pennies_chain(1, &Budget::default()).unwrap().payoffs() == figure1(1.0).unwrap().payoffs());
        assert!(scaled_pennies_chain(0, &Budget::default()).is_err());
        let tight = Budget { payoff_entries: 1000, ..Budget::default() };
        assert!(scaled_pennies_chain(4, &tight).is_err());
    }

    #[test]
    fn matching_game_values() {
        let g = matching_game(2).unwrap();
        assert_eq!(g.utility(g.index_of(&[0, 0]), 0), 1.0);
        assert_eq!(g.utility(g.index_of(&[0, 1]), 0), 0.0);
        assert_eq!(g.constant_sum(), Some(1.0));
        assert!(matching_game(1).is_err());
    }

    #[test]
    fn rps_structure() {
        let g = rps(3).unwrap();
        // rock=1, paper=2, scissors=3; 2 beats 1
        assert_eq!(g.utility(g.index_of(&[1, 0]), 0), 1.0);
        assert_eq!(g.utility(g.index_of(&[0, 1]), 0), 0.0);
        assert_eq!(g.utility(g.index_of(&[2, 2]), 0), 0.5);
        let g5 = rps(5).unwrap();
        for a in 0..5 {
            let wins = (0..5).filter(|&b| g5.utility(g5.index_of(&[a, b]), 0) == 1.0).count();
            assert_eq!(wins, 2);
        }
        assert!(rps(4).is_err());
        assert!(rps(1).is_err());
    }

    #[test]
    fn dummy_pennies_shape_and_label_frequency() {
        let (g, ce) = dummy_pennies(5).unwrap();
        assert_eq!(g.num_actions(), 10);
        assert_eq!(ce.support_size(), 20);
        for d in 0..5 {
            let mass: f64 = ce.entries().filter(|&(i, _)| g.action_of(i, 0) / 2 == d).map(|(_, p)| p).sum();
            assert!((mass - 0.2).abs() < 1e-12);
        }
        // labels never affect payoffs
        let a = g.index_of(&[dummy_action(0, 1), dummy_action(0, 4)]);
        let b = g.index_of(&[dummy_action(0, 3), dummy_action(0, 0)]);
        assert_eq!(g.utility(a, 0), g.utility(b, 0));
    }

    #[test]
    fn random_games_are_reproducible() {
        let a = random_game(3, 2, 42, &Budget::default()).unwrap();
        let b = random_game(3, 2, 42, &Budget::default()).unwrap();
        let c = random_game(3, 2, 43, &Budget::default()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.payoffs(), c.payoffs());
        let z = random_zero_sum(4, 9).unwrap();
        assert_eq!(z.constant_sum(), Some(1.0));
    }
}
