use hyperdom::families::{make_g3, sample_member, sample_random_hypergraph, SampleBounds};
use hyperdom_cli::hgr::{emit_hgr, parse_document, parse_hgr};
use hyperdom_cli::specfile::{emit_g3_spec, parse_g3_spec};
use proptest::prelude::*;

fn arb_hypergraph() -> impl Strategy<Value = hyperdom::Hypergraph> {
    (2usize..=16, 2usize..=5, 1usize..=30, any::<u64>()).prop_filter_map("infeasible", |(n, r, m, seed)| {
        sample_random_hypergraph(n, r.min(n), m, seed).ok()
    })
}

proptest! {
    #[test]
    fn parse_emit_is_identity(h in arb_hypergraph()) {
        let text = emit_hgr(&h);
        prop_assert_eq!(parse_hgr(&text).unwrap(), h);
        prop_assert!(text.ends_with('\n'));
        prop_assert!(!text.lines().any(|l| l.ends_with(' ')));
    }

    #[test]
    fn emit_canonicalizes_shuffled_text(h in arb_hypergraph(), rot in 0usize..8, rev in any::<bool>()) {
        let mut lines: Vec<String> = h
            .edge_lists()
            .into_iter()
            .map(|mut e| {
                if rev {
                    e.reverse();
                }
                e.iter().map(u32::to_string).collect::<Vec<_>>().join("  ")
            })
            .collect();
        let k = rot % lines.len();
        lines.rotate_left(k);
        let text = format!("c shuffled\np hg {} {}\n{}", h.n(), h.m(), lines.join("\n"));
        prop_assert_eq!(parse_document(&text).unwrap().edges.len(), h.m());
        prop_assert_eq!(emit_hgr(&parse_hgr(&text).unwrap()), emit_hgr(&h));
    }

    #[test]
    fn spec_files_round_trip(seed in any::<u64>()) {
        let bounds = SampleBounds { max_n: 20, ..SampleBounds::default() };
        let (spec, h) = sample_member(&bounds, seed).unwrap();
        let text = emit_g3_spec(&spec);
        let back = parse_g3_spec(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(make_g3(&back).unwrap().hypergraph, h);
    }
}
