use issuescope_core::graph::{layout_step, LayoutParams, LayoutState};
use proptest::prelude::*;

fn graph(max_nodes: usize) -> impl Strategy<Value = (Vec<String>, Vec<(usize, usize)>)> {
    (1..=max_nodes).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n, 0..n), 0..(2 * n).min(600));
        (Just((0..n).map(|i| format!("n{i}")).collect::<Vec<_>>()), edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_and_cooling((ids, edges) in graph(500), seed in any::<u64>()) {
        let p = LayoutParams::with_seed(seed);
        let edge_ids: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (ids[a].as_str(), ids[b].as_str())).collect();
        let mut s = LayoutState::new(ids.iter().map(String::as_str), edge_ids, &p).unwrap();
        let mut alpha = s.alpha;
        while !s.converged && s.iterations < p.max_iterations {
            s = layout_step(s, &p);
            prop_assert!(s.alpha < alpha);
            alpha = s.alpha;
            prop_assert!(s.positions.iter().flatten().all(|v| v.is_finite()));
        }
    }
}
