mod common;

use common::{brute_gamma, brute_least_dominating, brute_nu, brute_tau};
use hyperdom::exact::{is_dominating, is_transversal};
use hyperdom::families::sample_random_hypergraph;
use hyperdom::{check_bound_chain, max_matching, max_matching_avoiding, min_dominating, min_transversal, Hypergraph};
use proptest::prelude::*;

fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (3usize..=10, 2usize..=4, 1usize..=14, any::<u64>()).prop_filter_map("infeasible", |(n, r, m, seed)| {
        sample_random_hypergraph(n, r.min(n), m, seed).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solvers_match_enumeration(h in arb_hypergraph()) {
        let nu = max_matching(&h).unwrap();
        let gamma = min_dominating(&h).unwrap();
        let tau = min_transversal(&h).unwrap();
        prop_assert_eq!(nu.value, brute_nu(&h));
        prop_assert_eq!(gamma.value, brute_gamma(&h));
        prop_assert_eq!(tau.value, brute_tau(&h));

        let m = nu.matching().unwrap();
        prop_assert!(m.is_valid_in(&h));
        prop_assert_eq!(m.len(), nu.value);
        prop_assert!(is_dominating(&h, gamma.vertices().unwrap()));
        prop_assert!(is_transversal(&h, tau.vertices().unwrap()));
        prop_assert_eq!(gamma.vertices().unwrap().to_vec(), brute_least_dominating(&h));
    }

    #[test]
    fn bound_chain_holds(h in arb_hypergraph()) {
        let r = check_bound_chain(&h).unwrap();
        prop_assert!(r.chain_ok, "{:?}", r.violated);
    }

    #[test]
    fn avoiding_nothing_is_maximum(h in arb_hypergraph()) {
        let m = max_matching_avoiding(&h, &[]).unwrap().unwrap();
        prop_assert_eq!(m.len(), max_matching(&h).unwrap().value);
    }

    #[test]
    fn avoiding_respects_forbidden(h in arb_hypergraph(), a in 1u32..=3, b in 1u32..=3) {
        if let Some(m) = max_matching_avoiding(&h, &[a, b]).unwrap() {
            prop_assert!(m.is_valid_in(&h));
            prop_assert_eq!(m.len(), max_matching(&h).unwrap().value);
            for &i in m.edges() {
                prop_assert!(!h.edge(i).contains(a) && !h.edge(i).contains(b));
            }
        }
    }

    #[test]
    fn deleting_an_edge_is_monotone(h in arb_hypergraph(), pick in any::<prop::sample::Index>()) {
        prop_assume!(h.m() >= 2);
        let i = pick.index(h.m());
        let smaller = h.without_edges(&[i]);
        prop_assert!(max_matching(&smaller).unwrap().value <= max_matching(&h).unwrap().value);
        prop_assert!(min_transversal(&smaller).unwrap().value <= min_transversal(&h).unwrap().value);
    }
}

#[test]
fn exhaustive_small_hypergraphs() {
    // every hypergraph on 4 vertices built from the ten 2- and 3-subsets
    let mut all = Vec::new();
    for a in 1..=4i64 {
        for b in a + 1..=4 {
            all.push(vec![a, b]);
            for c in b + 1..=4 {
                all.push(vec![a, b, c]);
            }
        }
    }
    for sub in 1u32..(1 << all.len()) {
        let edges: Vec<&Vec<i64>> = (0..all.len()).filter(|i| sub >> i & 1 == 1).map(|i| &all[i]).collect();
        let h = Hypergraph::build(4, edges).unwrap();
        assert_eq!(max_matching(&h).unwrap().value, brute_nu(&h));
        assert_eq!(min_transversal(&h).unwrap().value, brute_tau(&h));
        if !h.has_isolated_vertex() {
            assert_eq!(min_dominating(&h).unwrap().value, brute_gamma(&h));
        }
    }
}
