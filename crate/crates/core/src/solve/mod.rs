//! Exact equilibria through linear programming, plus regret-matching play
//! and brute-force sparsest-equilibrium searches.

mod dynamics;
mod sparsest;
mod zero_sum;

pub use dynamics::{regret_matching, switch_inertia};
pub use sparsest::{sparsest_cce_bruteforce, sparsest_ce_bruteforce, sparsest_equilibrium_bruteforce};
pub use zero_sum::{
    ce_conditional_correspondence_check, guaranteed_payoff, is_optimal_strategy, maxmin_strategy,
    sparsest_ne_bruteforce, sparsest_optimal_strategy,
};

use serde::{Deserialize, Serialize};

use crate::lp::{LinearProgram, LpOutcome, LpSolution, Relation};
use crate::verify::{verify_cce, verify_ce};
use crate::{invalid, Budget, Error, Game, JointDistribution, Result, LP_TOL};

/// Masses at or below this are treated as LP round-off and dropped.
pub(crate) const MASS_FLOOR: f64 = 1e-12;

const MAX_TABLEAU_ENTRIES: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    #[serde(rename = "CE")]
    Ce,
    #[serde(rename = "CCE")]
    Cce,
    #[serde(rename = "NE-product")]
    NeProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution {
    pub distribution: JointDistribution,
    pub kind: EquilibriumKind,
    pub solver: String,
    pub support_size: usize,
}

impl EquilibriumSolution {
    pub fn new(distribution: JointDistribution, kind: EquilibriumKind, solver: &str) -> Self {
        EquilibriumSolution {
            support_size: distribution.support_size(),
            distribution,
            kind,
            solver: solver.to_string(),
        }
    }
}

/// What to optimise over the equilibrium polytope, as a linear function of the
/// profile masses (one coefficient per flat profile index).
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    AnyFeasible,
    MinLinear(Vec<f64>),
    MaxLinear(Vec<f64>),
}

/// The CE (single-switch) or CCE inequalities, restricted to the profile
/// variables in `vars`, with `Σ x = 1`.
pub(crate) fn equilibrium_program(game: &Game, kind: EquilibriumKind, vars: &[usize]) -> Result<LinearProgram> {
    let (n, m) = (game.num_players(), game.num_actions());
    let rows = match kind {
        EquilibriumKind::Ce => n * m * (m - 1),
        EquilibriumKind::Cce => n * m,
        EquilibriumKind::NeProduct => return invalid("product equilibria are not a single LP"),
    } + 1;
    if rows.saturating_mul(vars.len() + rows) > MAX_TABLEAU_ENTRIES {
        return Err(Error::BudgetExceeded {
            what: "LP tableau",
            required: (rows as u128) * (vars.len() + rows) as u128,
            limit: MAX_TABLEAU_ENTRIES as u128,
        });
    }
    let mut lp = LinearProgram::new(vars.len());
    for i in 0..n {
        match kind {
            EquilibriumKind::Ce => {
                for from in 0..m {
                    for to in (0..m).filter(|&t| t != from) {
                        let row = vars
                            .iter()
                            .map(|&p| {
                                if game.action_of(p, i) == from {
                                    game.utility(game.deviate(p, i, to), i) - game.utility(p, i)
                                } else {
                                    0.0
                                }
                            })
                            .collect();
                        lp.add_constraint(row, Relation::Le, 0.0)?;
                    }
                }
            }
            _ => {
                for to in 0..m {
                    let row = vars
                        .iter()
                        .map(|&p| game.utility(game.deviate(p, i, to), i) - game.utility(p, i))
                        .collect();
                    lp.add_constraint(row, Relation::Le, 0.0)?;
                }
            }
        }
    }
    lp.add_constraint(vec![1.0; vars.len()], Relation::Eq, 1.0)?;
    Ok(lp)
}

pub(crate) fn distribution_from(game: &Game, vars: &[usize], sol: &LpSolution) -> Result<JointDistribution> {
    let weights: Vec<(usize, f64)> = vars.iter().copied().zip(sol.x.iter().copied()).collect();
    JointDistribution::from_noisy(game, &weights, MASS_FLOOR)
}

/// Re-verifies an LP answer at ε = 0 with the LP tolerance.
pub(crate) fn certify(game: &Game, kind: EquilibriumKind, x: &JointDistribution) -> Result<()> {
    let report = match kind {
        EquilibriumKind::Ce => verify_ce(game, x, LP_TOL)?,
        _ => verify_cce(game, x, LP_TOL)?,
    };
    if !report.satisfied {
        return Err(Error::Solver(format!(
            "equilibrium certificate failed: worst regret {:.3e}",
            report.worst_value
        )));
    }
    Ok(())
}

fn solve_full(game: &Game, kind: EquilibriumKind, objective: &Objective, budget: &Budget) -> Result<EquilibriumSolution> {
    budget.check_lp(game.num_profiles())?;
    let vars: Vec<usize> = game.profiles().collect();
    let mut lp = equilibrium_program(game, kind, &vars)?;
    let check_len = |c: &Vec<f64>| {
        if c.len() != vars.len() {
            invalid(format!("objective needs {} coefficients", vars.len()))
        } else {
            Ok(())
        }
    };
    let outcome = match objective {
        Objective::AnyFeasible => lp.solve()?,
        Objective::MaxLinear(c) => {
            check_len(c)?;
            lp.maximize(c.clone())?;
            lp.solve()?
        }
        Objective::MinLinear(c) => {
            check_len(c)?;
            lp.minimize(c.clone())?;
            lp.solve_min()?
        }
    };
    let sol = match outcome {
        LpOutcome::Optimal(sol) => sol,
        LpOutcome::Infeasible => return Err(Error::Solver("equilibrium LP reported infeasible".into())),
        LpOutcome::Unbounded => return Err(Error::Solver("equilibrium LP reported unbounded".into())),
    };
    let x = distribution_from(game, &vars, &sol)?;
    certify(game, kind, &x)?;
    Ok(EquilibriumSolution::new(x, kind, "simplex-bland"))
}

/// An exact correlated equilibrium from the `n·m(m-1)` single-switch
/// inequalities over the full joint simplex.
pub fn solve_ce_lp(game: &Game, objective: &Objective, budget: &Budget) -> Result<EquilibriumSolution> {
    solve_full(game, EquilibriumKind::Ce, objective, budget)
}

/// An exact coarse correlated equilibrium from the `n·m` CCE inequalities.
pub fn solve_cce_lp(game: &Game, objective: &Objective, budget: &Budget) -> Result<EquilibriumSolution> {
    solve_full(game, EquilibriumKind::Cce, objective, budget)
}

/// A basic feasible solution of the CE polytope. Its support is at most the
/// number of LP rows, `n·m(m-1) + 1`.
pub fn find_vertex_ce(game: &Game, budget: &Budget) -> Result<EquilibriumSolution> {
    let mut sol = solve_ce_lp(game, &Objective::AnyFeasible, budget)?;
    sol.solver = "simplex-bland-vertex".into();
    Ok(sol)
}

/// `n·m(m-1) + 1`.
pub fn vertex_support_bound(n: usize, m: usize) -> usize {
    n * m * (m.saturating_sub(1)) + 1
}

/// True iff every profile coordinate has the same minimum and maximum over the
/// CE polytope (within [`LP_TOL`]).
pub fn ce_polytope_is_singleton(game: &Game, budget: &Budget) -> Result<bool> {
    budget.check_lp(game.num_profiles())?;
    let vars: Vec<usize> = game.profiles().collect();
    let base = equilibrium_program(game, EquilibriumKind::Ce, &vars)?;
    for p in 0..vars.len() {
        let mut unit = vec![0.0; vars.len()];
        unit[p] = 1.0;
        let mut lo = base.clone();
        lo.minimize(unit.clone())?;
        let mut hi = base.clone();
        hi.maximize(unit)?;
        let (Some(lo), Some(hi)) = (lo.solve_min()?.optimal(), hi.solve()?.optimal()) else {
            return Err(Error::Solver("coordinate LP over the CE polytope failed".into()));
        };
        if hi.objective - lo.objective > LP_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamegen::{figure1, figure1_equilibrium, matching_game, rps};

    #[test]
    fn rps_ce_is_uniform_and_unique() {
        let g = rps(3).unwrap();
        let sol = solve_ce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
        assert_eq!(sol.support_size, 9);
        for (_, p) in sol.distribution.entries() {
            assert!((p - 1.0 / 9.0).abs() < 1e-7);
        }
        assert!(ce_polytope_is_singleton(&g, &Budget::default()).unwrap());
    }

    #[test]
    fn figure1_ce_matches_the_product_table() {
        for v in [1.0, 3.0] {
            let g = figure1(v).unwrap();
            let table = figure1_equilibrium(&g, v).unwrap();
            let sol = solve_ce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
            for p in g.profiles() {
                assert!((sol.distribution.prob(p) - table.prob(p)).abs() < 1e-7);
            }
            assert!(ce_polytope_is_singleton(&g, &Budget::default()).unwrap());
        }
    }

    #[test]
    fn single_player_picks_the_best_action() {
        let g = Game::new("solo", 1, 2, vec![0.2, 0.9]).unwrap();
        let sol = solve_ce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
        assert_eq!(sol.distribution.entries().collect::<Vec<_>>(), vec![(1, 1.0)]);
        let cce = solve_cce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
        assert_eq!(cce.support_size, 1);
        let g5 = Game::new("solo5", 1, 5, vec![0.1, 0.3, 0.95, 0.2, 0.0]).unwrap();
        let v = find_vertex_ce(&g5, &Budget::default()).unwrap();
        assert_eq!(v.distribution.entries().collect::<Vec<_>>(), vec![(2, 1.0)]);
    }

    #[test]
    fn coordination_game_polytope_is_not_a_point() {
        let g = Game::new("coord", 2, 2, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(!ce_polytope_is_singleton(&g, &Budget::default()).unwrap());
    }

    #[test]
    fn objectives_select_extreme_equilibria() {
        let g = Game::new("coord", 2, 2, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.6, 0.6]).unwrap();
        let min00 = solve_ce_lp(&g, &Objective::MinLinear(vec![1.0, 0.0, 0.0, 0.0]), &Budget::default()).unwrap();
        assert!(min00.distribution.prob(0) < 1e-9);
        let max00 = solve_ce_lp(&g, &Objective::MaxLinear(vec![1.0, 0.0, 0.0, 0.0]), &Budget::default()).unwrap();
        assert!((max00.distribution.prob(0) - 1.0).abs() < 1e-9);
        assert!(solve_ce_lp(&g, &Objective::MaxLinear(vec![1.0]), &Budget::default()).is_err());
    }

    #[test]
    fn matching_game_cce_exists_and_budget_is_enforced() {
        let g = matching_game(3).unwrap();
        let sol = solve_cce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
        assert!(sol.support_size >= 3);
        let tiny = Budget { lp_variables: 4, ..Budget::default() };
        assert!(matches!(solve_ce_lp(&g, &Objective::AnyFeasible, &tiny), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn vertex_bound_arithmetic() {
        assert_eq!(vertex_support_bound(2, 2), 5);
        assert_eq!(vertex_support_bound(2, 3), 13);
        assert_eq!(vertex_support_bound(1, 5), 21);
    }
}
