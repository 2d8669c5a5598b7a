use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::{invalid, Result};

const MAX_TARGETS: usize = 5;
const POSITIVE_TOL: f64 = 1e-9;

/// Smallest `k` such that some `k` positive reals generate every target as a
/// subset sum.
///
/// A candidate is described by which targets each generator contributes to:
/// one nonzero bitmask per generator. Two generators with the same mask can be
/// merged, so it suffices to try sets of `k` distinct masks. For each set the
/// question "is there `p > 0` with `M p = t`" is one LP maximising the smallest
/// entry of `p`. `k = len(targets)` always works (each target generates itself).
pub fn min_partial_sum_generators(targets: &[f64]) -> Result<usize> {
    if targets.is_empty() {
        return invalid("no targets");
    }
    if targets.len() > MAX_TARGETS {
        return invalid(format!("at most {} targets are supported", MAX_TARGETS));
    }
    if targets.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return invalid("targets must be positive");
    }
    let n = targets.len();
    let masks: Vec<u32> = (1..(1u32 << n)).collect();
    for k in 1..n {
        let mut chosen = Vec::with_capacity(k);
        if any_subset(&masks, k, 0, &mut chosen, &mut |cols| generates(targets, cols))? {
            return Ok(k);
        }
    }
    Ok(n)
}

fn any_subset(
    masks: &[u32],
    k: usize,
    start: usize,
    chosen: &mut Vec<u32>,
    test: &mut dyn FnMut(&[u32]) -> Result<bool>,
) -> Result<bool> {
    if chosen.len() == k {
        return test(chosen);
    }
    for i in start..masks.len() {
        if masks.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(masks[i]);
        if any_subset(masks, k, i + 1, chosen, test)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

fn generates(targets: &[f64], columns: &[u32]) -> Result<bool> {
    let n = targets.len();
    let union = columns.iter().fold(0, |acc, c| acc | c);
    if union != (1 << n) - 1 {
        return Ok(false);
    }
    let k = columns.len();
    // variables: p_0..p_{k-1}, s
    let mut lp = LinearProgram::new(k + 1);
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    lp.maximize(objective)?;
    for (t_idx, &t) in targets.iter().enumerate() {
        let mut row: Vec<f64> = columns.iter().map(|c| if c >> t_idx & 1 == 1 { 1.0 } else { 0.0 }).collect();
        row.push(0.0);
        lp.add_constraint(row, Relation::Eq, t)?;
    }
    for j in 0..k {
        let mut row = vec![0.0; k + 1];
        row[j] = -1.0;
        row[k] = 1.0;
        lp.add_constraint(row, Relation::Le, 0.0)?;
    }
    let mut cap = vec![0.0; k + 1];
    cap[k] = 1.0;
    let largest = targets.iter().cloned().fold(0.0, f64::max);
    lp.add_constraint(cap, Relation::Le, largest)?;
    Ok(match lp.solve()? {
        LpOutcome::Optimal(sol) => sol.objective > POSITIVE_TOL,
        _ => false,
    })
}
