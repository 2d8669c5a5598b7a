mod common;

use sparse_eq::sparsify::{k_bound_cce_alg, k_bound_cce_exist, k_bound_ce_alg, k_bound_ce_exist};

#[test]
fn grid_matches_high_precision_values() {
    let rows = common::bound_grid();
    assert_eq!(rows.len(), 200);
    for r in rows {
        let at = format!("n={} m={} eps={}", r.n, r.m, r.epsilon);
        assert_eq!(k_bound_cce_exist(r.n, r.m, r.epsilon).unwrap(), r.cce_exist, "cce_exist {at}");
        assert_eq!(k_bound_cce_alg(r.n, r.m, r.epsilon).unwrap(), r.cce_alg, "cce_alg {at}");
        assert_eq!(k_bound_ce_exist(r.n, r.m, r.epsilon).unwrap(), (r.ce_exist_k, r.ce_exist_b), "ce_exist {at}");
        assert_eq!(k_bound_ce_alg(r.n, r.m, r.epsilon).unwrap(), r.ce_alg, "ce_alg {at}");
    }
}

#[test]
fn bounds_shrink_as_epsilon_grows() {
    let mut last = u64::MAX;
    for eps in [0.05, 0.1, 0.2, 0.5, 1.0] {
        let k = k_bound_ce_alg(3, 4, eps).unwrap();
        assert!(k < last);
        last = k;
    }
}
