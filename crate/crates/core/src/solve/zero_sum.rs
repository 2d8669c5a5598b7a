use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::solve::{EquilibriumKind, EquilibriumSolution, MASS_FLOOR};
use crate::verify::verify_ce;
use crate::{invalid, Budget, Error, Game, JointDistribution, MixedStrategy, Result, LP_TOL};

/// Tolerance for "achieves the game value" in optimality checks.
const VALUE_TOL: f64 = 1e-6;

fn require_zero_sum(game: &Game) -> Result<()> {
    if game.num_players() != 2 {
        return invalid("expected a two-player game");
    }
    if game.constant_sum().is_none() {
        return invalid("game is not zero-sum up to a constant shift");
    }
    Ok(())
}

fn opponent(player: usize) -> usize {
    1 - player
}

fn utility_of(game: &Game, player: usize, own: usize, other: usize) -> f64 {
    let idx = if player == 0 {
        game.index_of(&[own, other])
    } else {
        game.index_of(&[other, own])
    };
    game.utility(idx, player)
}

/// `min_b Σ_a σ(a) u_i(a, b)`: what `strategy` guarantees its player.
pub fn guaranteed_payoff(game: &Game, strategy: &MixedStrategy) -> f64 {
    let i = strategy.player;
    (0..game.num_actions())
        .map(|b| strategy.support().map(|a| strategy.probs[a] * utility_of(game, i, a, b)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn is_optimal_strategy(game: &Game, strategy: &MixedStrategy, value: f64, tol: f64) -> bool {
    guaranteed_payoff(game, strategy) >= value - tol
}

/// Maximin LP over `actions`: maximise `v` subject to
/// `Σ_a σ(a) u_i(a, b) >= v` for every opponent action `b`, or, when `floor`
/// is given, feasibility of `Σ_a σ(a) u_i(a, b) >= floor`.
fn guarantee_program(game: &Game, player: usize, actions: &[usize], floor: Option<f64>) -> Result<LinearProgram> {
    let m = game.num_actions();
    let k = actions.len();
    let width = if floor.is_some() { k } else { k + 1 };
    let mut lp = LinearProgram::new(width);
    if floor.is_none() {
        let mut c = vec![0.0; width];
        c[k] = 1.0;
        lp.maximize(c)?;
    }
    for b in 0..m {
        let mut row: Vec<f64> = actions.iter().map(|&a| -utility_of(game, player, a, b)).collect();
        match floor {
            None => {
                row.push(1.0);
                lp.add_constraint(row, Relation::Le, 0.0)?;
            }
            Some(f) => {
                lp.add_constraint(row, Relation::Le, -f)?;
            }
        }
    }
    let mut sum = vec![1.0; k];
    if floor.is_none() {
        sum.push(0.0);
    }
    lp.add_constraint(sum, Relation::Eq, 1.0)?;
    Ok(lp)
}

fn strategy_from(game: &Game, player: usize, actions: &[usize], x: &[f64]) -> Result<MixedStrategy> {
    let mut probs = vec![0.0; game.num_actions()];
    for (&a, &p) in actions.iter().zip(x) {
        if p > MASS_FLOOR {
            probs[a] = p;
        }
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    MixedStrategy::new(player, probs)
}

/// An optimal (maxmin) strategy for `player` and the game value to that player.
pub fn maxmin_strategy(game: &Game, player: usize) -> Result<(MixedStrategy, f64)> {
    require_zero_sum(game)?;
    game.check_player(player)?;
    let actions: Vec<usize> = (0..game.num_actions()).collect();
    let lp = guarantee_program(game, player, &actions, None)?;
    let sol = lp
        .solve()?
        .optimal()
        .ok_or_else(|| Error::Solver("maxmin LP has no optimum".into()))?;
    let m = game.num_actions();
    let strategy = strategy_from(game, player, &actions, &sol.x[..m])?;
    Ok((strategy, sol.x[m]))
}

/// An optimal strategy for `player` with the fewest actions, searching
/// supports by size and lexicographically within a size.
pub fn sparsest_optimal_strategy(game: &Game, player: usize, budget: &Budget) -> Result<MixedStrategy> {
    require_zero_sum(game)?;
    let m = game.num_actions();
    let subsets = if m >= 127 { u128::MAX } else { (1u128 << m) - 1 };
    budget.check_enumeration("support enumeration for optimal strategies", subsets)?;
    let (_, value) = maxmin_strategy(game, player)?;
    for size in 1..=m {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let lp = guarantee_program(game, player, &combo, Some(value - LP_TOL))?;
            if let LpOutcome::Optimal(_) = lp.solve()? {
                // best guarantee on this support, not just one above the floor
                let best = guarantee_program(game, player, &combo, None)?;
                if let LpOutcome::Optimal(sol) = best.solve()? {
                    let s = strategy_from(game, player, &combo, &sol.x[..size])?;
                    if is_optimal_strategy(game, &s, value, VALUE_TOL) {
                        return Ok(s);
                    }
                }
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
    }
    Err(Error::Solver("no optimal strategy found by support enumeration".into()))
}

/// A Nash equilibrium of a two-player zero-sum game whose row strategy has the
/// smallest support, and among those the smallest column support. Optimal
/// strategies are interchangeable, so the two searches are independent.
pub fn sparsest_ne_bruteforce(game: &Game, budget: &Budget) -> Result<EquilibriumSolution> {
    let row = sparsest_optimal_strategy(game, 0, budget)?;
    let col = sparsest_optimal_strategy(game, 1, budget)?;
    let x = JointDistribution::product(game, &[row, col])?;
    Ok(EquilibriumSolution::new(x, EquilibriumKind::NeProduct, "support-enumeration"))
}

/// Checks that, under the exact CE `pi`, the conditional distribution over the
/// opponent's actions given any positive-probability action of either player
/// is an optimal strategy for that opponent.
pub fn ce_conditional_correspondence_check(game: &Game, pi: &JointDistribution) -> Result<bool> {
    require_zero_sum(game)?;
    if !verify_ce(game, pi, LP_TOL)?.satisfied {
        return invalid("distribution is not an exact correlated equilibrium");
    }
    let values = [maxmin_strategy(game, 0)?.1, maxmin_strategy(game, 1)?.1];
    for given in 0..2 {
        let of = opponent(given);
        for action in 0..game.num_actions() {
            if let Some(cond) = pi.conditional(game, given, action, of) {
                if !is_optimal_strategy(game, &cond, values[of], VALUE_TOL) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Lexicographic successor of a sorted `k`-subset of `0..n`.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
