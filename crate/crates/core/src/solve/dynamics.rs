use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, Game, KUniformMultiset, Result};

/// Inertia `μ` of the switching probabilities, `2m - 1 > 2(m-1)·max|u|`.
pub fn switch_inertia(m: usize) -> f64 {
    (2 * m).saturating_sub(1).max(1) as f64
}

/// Regret matching in the Hart–Mas-Colell form.
///
/// Round one draws every action uniformly. Afterwards a player who last played
/// `k` switches to `j != k` with probability `max(D(k, j), 0) / μ`, where
/// `D(k, j)` is the average over past rounds of `u_i(j, a_{-i}) - u_i(a)` on
/// the rounds she played `k`, and keeps `k` otherwise. `D` is exactly the
/// single-switch regret of the empirical distribution of play, which is
/// returned as a `rounds`-uniform multiset.
///
/// Draws come from one ChaCha8 stream seeded with `seed`, players in order
/// within a round, so the output is reproducible bit for bit.
pub fn regret_matching(game: &Game, rounds: usize, seed: u64) -> Result<KUniformMultiset> {
    if rounds == 0 {
        return invalid("regret matching needs at least one round");
    }
    let (n, m) = (game.num_players(), game.num_actions());
    let mu = switch_inertia(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // cumulative[i][k * m + j]
    let mut cumulative = vec![vec![0.0f64; m * m]; n];
    let mut actions: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let mut samples = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let idx = game.index_of(&actions);
        samples.push(idx);
        if t == rounds {
            break;
        }
        for i in 0..n {
            let k = actions[i];
            let base = game.utility(idx, i);
            let row = &mut cumulative[i][k * m..(k + 1) * m];
            for (j, d) in row.iter_mut().enumerate() {
                *d += game.utility(game.deviate(idx, i, j), i) - base;
            }
        }
        let scale = 1.0 / (t as f64 * mu);
        for i in 0..n {
            let k = actions[i];
            let row = &cumulative[i][k * m..(k + 1) * m];
            let r: f64 = rng.gen();
            let mut acc = 0.0;
            for (j, &d) in row.iter().enumerate() {
                if j == k || d <= 0.0 {
                    continue;
                }
                acc += d * scale;
                if r < acc {
                    actions[i] = j;
                    break;
                }
            }
        }
    }
    KUniformMultiset::new(game, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamegen::figure1;
    use crate::verify::verify_ce_single_switch;

    #[test]
    fn single_round_is_a_point_mass() {
        let g = figure1(1.0).unwrap();
        let s = regret_matching(&g, 1, 3).unwrap();
        assert_eq!(s.k(), 1);
        let r = verify_ce_single_switch(&g, &s, 1.0).unwrap();
        assert!(r.worst_value <= 1.0);
        assert!(regret_matching(&g, 0, 3).is_err());
    }

    #[test]
    fn same_seed_same_history() {
        let g = figure1(1.0).unwrap();
        assert_eq!(regret_matching(&g, 500, 11).unwrap(), regret_matching(&g, 500, 11).unwrap());
        assert_ne!(regret_matching(&g, 500, 11).unwrap(), regret_matching(&g, 500, 12).unwrap());
    }

    #[test]
    fn switching_probabilities_stay_below_one() {
        // worst case: every off-diagonal average regret equals 1
        for m in 1usize..10 {
            assert!((m.saturating_sub(1)) as f64 / switch_inertia(m) < 1.0);
        }
    }
}
