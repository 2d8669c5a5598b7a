//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! All variables are nonnegative. Rows may be `<=`, `=` or `>=`. Every
//! optimal answer is re-checked against the original rows and rejected when
//! a residual exceeds [`LP_TOL`](crate::LP_TOL).

use crate::{invalid, Error, Result, LP_TOL};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PHASE_ONE_TOL: f64 = 1e-8;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    /// Maximised. Minimisation negates on the way in.
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Objective value in the caller's sense (minimum for `minimize`).
    pub objective: f64,
    /// Structural variables in the final basis.
    pub basic: Vec<usize>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// A feasibility problem (zero objective) over `num_vars` nonnegative variables.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn maximize(&mut self, c: Vec<f64>) -> Result<&mut Self> {
        if c.len() != self.num_vars {
            return invalid("objective length differs from variable count");
        }
        self.objective = c;
        Ok(self)
    }

    pub fn minimize(&mut self, c: Vec<f64>) -> Result<&mut Self> {
        self.maximize(c.into_iter().map(|v| -v).collect())
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<&mut Self> {
        if coeffs.len() != self.num_vars {
            return invalid(format!(
                "constraint row has {} coefficients, expected {}",
                coeffs.len(),
                self.num_vars
            ));
        }
        if !rhs.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("constraint has a non-finite entry");
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(self)
    }

    /// Solves a maximisation set up with [`maximize`](Self::maximize) or
    /// [`new`](Self::new). For `minimize` use [`solve_min`](Self::solve_min)
    /// to read the objective back in minimisation sense.
    pub fn solve(&self) -> Result<LpOutcome> {
        let outcome = Tableau::build(self).run()?;
        Ok(match outcome {
            LpOutcome::Optimal(mut sol) => {
                sol.max_residual = self.residual(&sol.x);
                if sol.max_residual > LP_TOL {
                    return Err(Error::Solver(format!(
                        "certificate residual {:.3e} exceeds {:.0e}",
                        sol.max_residual, LP_TOL
                    )));
                }
                sol.objective = dot(&self.objective, &sol.x);
                LpOutcome::Optimal(sol)
            }
            other => other,
        })
    }

    pub fn solve_min(&self) -> Result<LpOutcome> {
        Ok(match self.solve()? {
            LpOutcome::Optimal(mut sol) => {
                sol.objective = -sol.objective;
                LpOutcome::Optimal(sol)
            }
            other => other,
        })
    }

    /// Largest violation of any row or nonnegativity bound at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().fold(0.0f64, |w, &v| w.max(-v));
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, x);
            let r = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(r);
        }
        worst
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Tableau {
    rows: usize,
    /// Columns excluding the right-hand side.
    cols: usize,
    structural: usize,
    first_artificial: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    objective: Vec<f64>,
    live: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), flipped, -c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs)
                }
            })
            .collect();
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let arts = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let cols = n + slacks + arts;
        let width = cols + 1;
        let m = rows.len();
        let mut data = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let (mut next_slack, mut next_art) = (n, n + slacks);
        for (r, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
            let row = &mut data[r * width..(r + 1) * width];
            row[..n].copy_from_slice(coeffs);
            row[cols] = *rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    next_art += 1;
                }
            }
        }
        let mut objective = vec![0.0; cols];
        objective[..n].copy_from_slice(&lp.objective);
        Tableau {
            rows: m,
            cols,
            structural: n,
            first_artificial: n + slacks,
            data,
            basis,
            objective,
            live: vec![true; m],
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.cols + 1;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * width..(pr + 1) * width] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.data[pr * width..(pr + 1) * width].to_vec();
        for r in 0..self.rows {
            if r == pr || !self.live[r] {
                continue;
            }
            let factor = self.at(r, pc);
            if factor != 0.0 {
                let row = &mut self.data[r * width..(r + 1) * width];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Maximises `cost` over the current basis; columns at or past `barred` never enter.
    fn optimize(&mut self, cost: &[f64], barred: usize) -> Result<bool> {
        let width = self.cols + 1;
        let mut reduced = cost.to_vec();
        reduced.push(0.0);
        for r in 0..self.rows {
            if !self.live[r] {
                continue;
            }
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (d, v) in reduced.iter_mut().zip(&self.data[r * width..(r + 1) * width]) {
                    *d -= cb * v;
                }
            }
        }
        for _ in 0..MAX_PIVOTS {
            let entering = match (0..barred).find(|&j| reduced[j] > COST_TOL) {
                Some(j) => j,
                None => return Ok(true),
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                if !self.live[r] {
                    continue;
                }
                let a = self.at(r, entering);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                            if ratio < bratio && !tie || tie && self.basis[r] < self.basis[br] {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = leave else {
                return Ok(false);
            };
            self.pivot(pr, entering);
            let factor = reduced[entering];
            for (d, v) in reduced.iter_mut().zip(&self.data[pr * width..(pr + 1) * width]) {
                *d -= factor * v;
            }
            reduced[entering] = 0.0;
        }
        Err(Error::Solver(format!("no convergence after {} pivots", MAX_PIVOTS)))
    }

    fn run(mut self) -> Result<LpOutcome> {
        if self.first_artificial < self.cols {
            let mut phase_one = vec![0.0; self.cols];
            for c in &mut phase_one[self.first_artificial..] {
                *c = -1.0;
            }
            self.optimize(&phase_one, self.first_artificial)?;
            let infeasibility: f64 = (0..self.rows)
                .filter(|&r| self.live[r] && self.basis[r] >= self.first_artificial)
                .map(|r| self.rhs(r))
                .sum();
            if infeasibility > PHASE_ONE_TOL {
                return Ok(LpOutcome::Infeasible);
            }
            for r in 0..self.rows {
                if self.basis[r] < self.first_artificial {
                    continue;
                }
                match (0..self.first_artificial).find(|&j| self.at(r, j).abs() > PIVOT_TOL) {
                    Some(j) => self.pivot(r, j),
                    None => self.live[r] = false,
                }
            }
        }
        let cost = self.objective.clone();
        if !self.optimize(&cost, self.first_artificial)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; self.structural];
        let mut basic = Vec::new();
        for r in 0..self.rows {
            if self.live[r] && self.basis[r] < self.structural {
                x[self.basis[r]] = self.rhs(r).max(0.0);
                basic.push(self.basis[r]);
            }
        }
        basic.sort_unstable();
        Ok(LpOutcome::Optimal(LpSolution {
            x,
            objective: 0.0,
            basic,
            max_residual: 0.0,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![3.0, 5.0]).unwrap();
        lp.add_constraint(vec![1.0, 0.0], Relation::Le, 4.0).unwrap();
        lp.add_constraint(vec![0.0, 2.0], Relation::Le, 12.0).unwrap();
        lp.add_constraint(vec![3.0, 2.0], Relation::Le, 18.0).unwrap();
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-9 && (sol.x[1] - 6.0).abs() < 1e-9);
        assert!((sol.objective - 36.0).abs() < 1e-9);
    }

    #[test]
    fn minimisation_with_equalities_and_ge() {
        // min x + 2y + 3z, x + y + z = 1, y + z >= 0.5, z >= 0.2
        let mut lp = LinearProgram::new(3);
        lp.minimize(vec![1.0, 2.0, 3.0]).unwrap();
        lp.add_constraint(vec![1.0, 1.0, 1.0], Relation::Eq, 1.0).unwrap();
        lp.add_constraint(vec![0.0, 1.0, 1.0], Relation::Ge, 0.5).unwrap();
        lp.add_constraint(vec![0.0, 0.0, 1.0], Relation::Ge, 0.2).unwrap();
        let sol = lp.solve_min().unwrap().optimal().unwrap();
        assert!((sol.objective - (0.5 + 0.6 + 0.6)).abs() < 1e-9, "{:?}", sol);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0).unwrap();
        lp.add_constraint(vec![1.0, 1.0], Relation::Ge, 2.0).unwrap();
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 0.0]).unwrap();
        lp.add_constraint(vec![-1.0, 1.0], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // -x <= -3 means x >= 3; min x
        let mut lp = LinearProgram::new(1);
        lp.minimize(vec![1.0]).unwrap();
        lp.add_constraint(vec![-1.0], Relation::Le, -3.0).unwrap();
        let sol = lp.solve_min().unwrap().optimal().unwrap();
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 0.0]).unwrap();
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 1.0).unwrap();
        lp.add_constraint(vec![2.0, 2.0], Relation::Eq, 2.0).unwrap();
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![0.75, -150.0, 0.02, -6.0]).unwrap();
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0).unwrap();
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert!((sol.objective - 0.05).abs() < 1e-9);
    }

    #[test]
    fn rejects_malformed_rows() {
        let mut lp = LinearProgram::new(2);
        assert!(lp.add_constraint(vec![1.0], Relation::Le, 1.0).is_err());
        assert!(lp.add_constraint(vec![1.0, f64::NAN], Relation::Le, 1.0).is_err());
        assert!(lp.maximize(vec![1.0]).is_err());
    }
}
