use proptest::prelude::*;

use sparse_eq::gamegen::{figure1, figure1_equilibrium, random_game};
use sparse_eq::solve::{solve_cce_lp, Objective};
use sparse_eq::sparsify::{attempt_seed, sample_k_uniform, sparsify_cce, SparsifyConfig};
use sparse_eq::verify::verify_cce;
use sparse_eq::Budget;

#[test]
fn single_draws_follow_the_distribution() {
    let g = figure1(3.0).unwrap();
    let x = figure1_equilibrium(&g, 3.0).unwrap();
    let draws = 20_000;
    let mut counts = [0usize; 4];
    for d in 0..draws {
        let s = sample_k_uniform(&g, &x, 1, attempt_seed(99, d + 1)).unwrap();
        counts[s.samples()[0]] += 1;
    }
    let chi2: f64 = (0..4)
        .map(|i| {
            let expected = x.prob(i) * draws as f64;
            (counts[i] as f64 - expected).powi(2) / expected
        })
        .sum();
    // 3 degrees of freedom, 0.999 quantile
    assert!(chi2 < 16.27, "chi-square {chi2} with counts {counts:?}");
}

#[test]
fn pooled_samples_match_masses() {
    let g = figure1(1.0).unwrap();
    let x = figure1_equilibrium(&g, 1.0).unwrap();
    let s = sample_k_uniform(&g, &x, 40_000, 5).unwrap();
    let freq = s.to_distribution(&g).unwrap();
    for i in g.profiles() {
        assert!((freq.prob(i) - 0.25).abs() < 0.02);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sparsify_outcomes_are_consistent(seed in any::<u64>(), eps in 0.2f64..=1.0, attempts in 1usize..4) {
        let g = random_game(3, 2, seed, &Budget::default()).unwrap();
        let base = solve_cce_lp(&g, &Objective::AnyFeasible, &Budget::default()).unwrap();
        let cfg = SparsifyConfig::new(eps, seed).with_max_attempts(attempts);
        let out = sparsify_cce(&g, &base.distribution, &cfg).unwrap();
        prop_assert!(out.attempts >= 1 && out.attempts <= attempts);
        prop_assert_eq!(out.multiset.k(), out.k);
        prop_assert!(out.multiset.support_size() <= out.k.min(base.support_size));
        let again = verify_cce(&g, &out.multiset, eps).unwrap();
        prop_assert_eq!(again.satisfied, out.verified);
        prop_assert_eq!(again.worst_value, out.worst_value);
        if out.verified {
            prop_assert!(out.worst_value <= eps + 1e-12);
        } else {
            prop_assert_eq!(out.attempts, attempts);
        }
        prop_assert_eq!(sparsify_cce(&g, &base.distribution, &cfg).unwrap(), out);
    }
}
