use crate::{invalid, Budget, Game, Result};

/// Exact cover by 3-sets: a universe `0..universe_size` and a collection of
/// 3-element subsets. Elements are 0-based here and 1-based in JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    universe_size: usize,
    sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(universe_size: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        if universe_size == 0 || !universe_size.is_multiple_of(3) {
            return invalid("universe size must be a positive multiple of 3");
        }
        if sets.is_empty() {
            return invalid("collection is empty");
        }
        let mut covered = vec![false; universe_size];
        for s in &sets {
            if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
                return invalid(format!("set {:?} repeats an element", s));
            }
            for &e in s {
                if e >= universe_size {
                    return invalid(format!("element {} outside the universe", e + 1));
                }
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return invalid(format!("element {} is in no set", e + 1));
        }
        Ok(X3CInstance { universe_size, sets })
    }

    /// Same as [`new`](Self::new) with 1-based element labels.
    pub fn from_one_based(universe_size: usize, sets: &[[usize; 3]]) -> Result<Self> {
        if sets.iter().flatten().any(|&e| e == 0) {
            return invalid("elements are labelled from 1");
        }
        X3CInstance::new(universe_size, sets.iter().map(|s| [s[0] - 1, s[1] - 1, s[2] - 1]).collect())
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Number of actions per player in the reduced game.
    pub fn reduced_actions(&self) -> usize {
        self.sets.len().max(self.universe_size)
    }

    /// Set index behind a row action of the reduced game (padding rows copy set 0).
    pub fn row_origin(&self, action: usize) -> usize {
        if action < self.sets.len() {
            action
        } else {
            0
        }
    }

    /// Element behind a column action of the reduced game (padding columns copy element 0).
    pub fn column_origin(&self, action: usize) -> usize {
        if action < self.universe_size {
            action
        } else {
            0
        }
    }

    /// Backtracking search for an exact cover; returns set indices.
    pub fn exact_cover(&self) -> Option<Vec<usize>> {
        fn search(inst: &X3CInstance, covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
            let Some(e) = covered.iter().position(|c| !c) else {
                return true;
            };
            for (i, s) in inst.sets.iter().enumerate() {
                if s.contains(&e) && s.iter().all(|&x| !covered[x]) {
                    s.iter().for_each(|&x| covered[x] = true);
                    chosen.push(i);
                    if search(inst, covered, chosen) {
                        return true;
                    }
                    chosen.pop();
                    s.iter().for_each(|&x| covered[x] = false);
                }
            }
            false
        }
        let mut covered = vec![false; self.universe_size];
        let mut chosen = Vec::new();
        search(self, &mut covered, &mut chosen).then_some(chosen)
    }
}

/// Row player picks a set, column player picks an element; the row player
/// scores 1 when the element is covered and 0 otherwise (the `±1` game under
/// `(u+1)/2`), and the column player gets the complement.
///
/// When the two sides differ in size the shorter one is padded with copies of
/// its first action, so the game is square. Copies are payoff-identical to
/// their original and never lower a sparsest support.
pub fn x3c_reduce(instance: &X3CInstance) -> Result<Game> {
    let m = instance.reduced_actions();
    Game::from_fn(
        format!(
            "x3c universe={} sets={} norm=(u+1)/2",
            instance.universe_size,
            instance.sets.len()
        ),
        2,
        m,
        &Budget::default(),
        |a, i| {
            let set = instance.sets[instance.row_origin(a[0])];
            let covered = set.contains(&instance.column_origin(a[1]));
            let u1 = if covered { 1.0 } else { 0.0 };
            if i == 0 {
                u1
            } else {
                1.0 - u1
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cover_instance() -> X3CInstance {
        X3CInstance::from_one_based(6, &[[1, 2, 3], [4, 5, 6], [2, 3, 4]]).unwrap()
    }

    pub(crate) fn no_cover_instance() -> X3CInstance {
        X3CInstance::from_one_based(6, &[[1, 2, 3], [2, 4, 5], [3, 5, 6]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(X3CInstance::from_one_based(5, &[[1, 2, 3]]).is_err());
        assert!(X3CInstance::from_one_based(3, &[[1, 1, 2]]).is_err());
        assert!(X3CInstance::from_one_based(3, &[[1, 2, 4]]).is_err());
        assert!(X3CInstance::from_one_based(6, &[[1, 2, 3]]).is_err());
        assert!(X3CInstance::from_one_based(3, &[[0, 1, 2]]).is_err());
        assert!(X3CInstance::from_one_based(3, &[[1, 2, 3]]).is_ok());
    }

    #[test]
    fn exact_cover_search() {
        assert_eq!(cover_instance().exact_cover(), Some(vec![0, 1]));
        assert_eq!(no_cover_instance().exact_cover(), None);
    }

    #[test]
    fn reduction_pads_rows_with_copies_of_the_first_set() {
        let inst = cover_instance();
        let g = x3c_reduce(&inst).unwrap();
        assert_eq!(g.num_actions(), 6);
        assert_eq!(g.constant_sum(), Some(1.0));
        // set {1,2,3} covers element 2, misses element 4
        assert_eq!(g.utility(g.index_of(&[0, 1]), 0), 1.0);
        assert_eq!(g.utility(g.index_of(&[0, 3]), 0), 0.0);
        for col in 0..6 {
            for pad in 3..6 {
                assert_eq!(g.utility(g.index_of(&[pad, col]), 0), g.utility(g.index_of(&[0, col]), 0));
            }
        }
    }

    #[test]
    fn reduction_pads_columns_when_sets_outnumber_elements() {
        let inst = X3CInstance::from_one_based(3, &[[1, 2, 3], [1, 2, 3], [1, 2, 3], [1, 2, 3]]).unwrap();
        let g = x3c_reduce(&inst).unwrap();
        assert_eq!(g.num_actions(), 4);
        assert_eq!(inst.column_origin(3), 0);
    }
}
