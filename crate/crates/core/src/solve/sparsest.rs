use crate::lp::LpOutcome;
use crate::solve::zero_sum::next_combination;
use crate::solve::{certify, distribution_from, equilibrium_program, EquilibriumKind, EquilibriumSolution};
use crate::{invalid, Budget, Game, Result};

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Smallest-support exact equilibrium with support at most `max_support`.
///
/// Supports are visited by size and lexicographically within a size; for each
/// the equilibrium LP restricted to those profiles is tested for feasibility.
/// The first feasible support wins. Refuses up front when the number of
/// candidate supports exceeds the enumeration budget.
pub fn sparsest_equilibrium_bruteforce(
    game: &Game,
    kind: EquilibriumKind,
    max_support: usize,
    budget: &Budget,
) -> Result<Option<EquilibriumSolution>> {
    if kind == EquilibriumKind::NeProduct {
        return invalid("use sparsest_ne_bruteforce for Nash equilibria");
    }
    if max_support == 0 {
        return invalid("max_support must be positive");
    }
    let p = game.num_profiles();
    let top = max_support.min(p);
    let total = (1..=top as u128).fold(0u128, |acc, s| acc.saturating_add(binomial(p as u128, s)));
    budget.check_enumeration("support enumeration for sparsest equilibria", total)?;
    for size in 1..=top {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let lp = equilibrium_program(game, kind, &combo)?;
            if let LpOutcome::Optimal(sol) = lp.solve()? {
                let x = distribution_from(game, &combo, &sol)?;
                certify(game, kind, &x)?;
                return Ok(Some(EquilibriumSolution::new(x, kind, "support-enumeration")));
            }
            if !next_combination(&mut combo, p) {
                break;
            }
        }
    }
    Ok(None)
}

pub fn sparsest_ce_bruteforce(game: &Game, max_support: usize, budget: &Budget) -> Result<Option<EquilibriumSolution>> {
    sparsest_equilibrium_bruteforce(game, EquilibriumKind::Ce, max_support, budget)
}

pub fn sparsest_cce_bruteforce(game: &Game, max_support: usize, budget: &Budget) -> Result<Option<EquilibriumSolution>> {
    sparsest_equilibrium_bruteforce(game, EquilibriumKind::Cce, max_support, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamegen::{figure1, matching_game};
    use crate::Error;

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 4), 1);
    }

    #[test]
    fn figure1_needs_the_full_grid() {
        let g = figure1(1.0).unwrap();
        assert!(sparsest_ce_bruteforce(&g, 3, &Budget::default()).unwrap().is_none());
        let sol = sparsest_ce_bruteforce(&g, 4, &Budget::default()).unwrap().unwrap();
        assert_eq!(sol.support_size, 4);
    }

    #[test]
    fn pure_equilibrium_has_support_one() {
        let g = Game::new("coord", 2, 2, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let sol = sparsest_ce_bruteforce(&g, 2, &Budget::default()).unwrap().unwrap();
        assert_eq!(sol.support_size, 1);
        assert_eq!(sol.distribution.support().next(), Some(0));
    }

    #[test]
    fn matching_game_cce_needs_m_profiles() {
        let g = matching_game(3).unwrap();
        assert!(sparsest_cce_bruteforce(&g, 2, &Budget::default()).unwrap().is_none());
        let sol = sparsest_cce_bruteforce(&g, 9, &Budget::default()).unwrap().unwrap();
        assert!(sol.support_size >= 3);
    }

    #[test]
    fn refuses_over_budget() {
        let g = matching_game(4).unwrap();
        let tiny = Budget { enumeration: 10, ..Budget::default() };
        assert!(matches!(sparsest_ce_bruteforce(&g, 2, &tiny), Err(Error::BudgetExceeded { .. })));
        assert!(sparsest_ce_bruteforce(&g, 0, &Budget::default()).is_err());
    }
}
