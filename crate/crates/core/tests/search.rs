use rbq_core::exactmath::{rat, ratio, Rational};
use rbq_core::operator::{cached_system, WeightMode};
use rbq_core::search::{
    grid_search_with_budget, hit_indices, random_probe, GridSpec, SUPPORT_ROWS123_COLS234, SUPPORT_ROWS34_COLS12,
};

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

#[test]
fn early_exit_never_changes_hits() {
    // rows 1-2 of columns 1-4 -> 3^8 candidates
    let g = GridSpec::new(ints(&[-1, 0, 1]), 0x00FF, rat(0));
    let sys = cached_system(WeightMode::Zero);
    let total = g.candidate_count() as u64;
    assert_eq!(total, 6561);
    assert_eq!(hit_indices(&g, sys, total, true), hit_indices(&g, sys, total, false));
    let g = GridSpec::new(vec![ratio(-1, 2), rat(0), rat(1)], 0x0F0F, rat(1));
    let sys = cached_system(WeightMode::SymbolicLambda);
    assert_eq!(hit_indices(&g, sys, 6561, true), hit_indices(&g, sys, 6561, false));
}

#[test]
fn grid_hits_agree_with_defect_oracle() {
    let g = GridSpec::new(
        vec![ratio(-3, 2), rat(-1), ratio(-1, 2), rat(0), ratio(1, 2), rat(1), ratio(3, 2)],
        0x0CCC,
        rat(1),
    );
    let r = grid_search_with_budget(&g, 1_000_000).unwrap();
    assert_eq!(r.candidates_tested, 7u64.pow(6));
    assert!(!r.hits.is_empty());
    let hit_set: Vec<u64> = r.hits.iter().map(|h| h.index).collect();
    for h in &r.hits {
        let m = h.matrix.to_rational_matrix().unwrap();
        assert!(m.is_rota_baxter().holds());
        assert_eq!(m, g.candidate(h.index));
    }
    for i in (0..r.candidates_tested).step_by(97) {
        assert_eq!(g.candidate(i).is_rota_baxter().holds(), hit_set.binary_search(&i).is_ok(), "candidate {i}");
    }
    assert!(r.unmatched_hits.is_empty(), "{:?}", r.unmatched_hits);
}

#[test]
fn grid_search_is_deterministic() {
    let g = GridSpec::new(ints(&[-1, 0, 1]), SUPPORT_ROWS34_COLS12 | 0x000F, rat(0));
    let a = grid_search_with_budget(&g, 1_000_000).unwrap();
    let b = grid_search_with_budget(&g, 1_000_000).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let idx: Vec<u64> = a.hits.iter().map(|h| h.index).collect();
    assert!(idx.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn shipped_nonzero_weight_mask_fits_default_budget() {
    let values = vec![ratio(-3, 2), rat(-1), ratio(-1, 2), rat(0), ratio(1, 2), rat(1), ratio(3, 2)];
    let g = GridSpec::new(values, SUPPORT_ROWS123_COLS234, rat(1));
    assert!(g.candidate_count() <= rbq_core::search::DEFAULT_BUDGET as u128);
}

#[test]
fn probes() {
    let zero = random_probe(&rat(0), 1000, 1).unwrap();
    assert!(zero.unmatched_hits.is_empty());
    let one = random_probe(&rat(1), 1000, 1).unwrap();
    let stats = one.instantiation.as_ref().unwrap();
    assert_eq!(stats.verified, 1000);
    assert_eq!(stats.matched, 1000);
    assert!(one.passed());
}
