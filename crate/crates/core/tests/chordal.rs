mod common;

use proptest::prelude::*;

use raag_coherence::chordal::{is_chordal, minimal_separators, Chordality};
use raag_coherence::t1::{t1_certify, verify_t1_certificate, T1Outcome};
use raag_coherence::SimplicialComplex;

use common::{brute_minimal_separators, graph_from_mask, has_long_induced_cycle};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = (usize, u64)> {
    (1..=max_n).prop_flat_map(|n| {
        let bits = n * (n - 1) / 2;
        let top = if bits == 0 { 1 } else { 1u64 << bits };
        (Just(n), 0..top)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn chordality_matches_brute_force((n, mask) in graph_strategy(9)) {
        let g = graph_from_mask(n, mask);
        let result = is_chordal(&g);
        prop_assert_eq!(result.is_chordal(), !has_long_induced_cycle(&g));
        match &result {
            Chordality::Yes { order } => prop_assert!(order.verify(&g, g.vertices())),
            Chordality::No { cycle } => prop_assert!(cycle.verify(&g, g.vertices())),
        }
    }

    #[test]
    fn t1_agrees_with_chordality((n, mask) in graph_strategy(9)) {
        let g = graph_from_mask(n, mask);
        let l = SimplicialComplex::from_graph(&g);
        let outcome = t1_certify(&l).unwrap();
        prop_assert_eq!(outcome.is_certified(), is_chordal(&g).is_chordal());
        if let T1Outcome::Certified { certificate } = &outcome {
            prop_assert!(verify_t1_certificate(certificate, &g, g.vertices()).is_ok());
            for leaf in certificate.leaves() {
                prop_assert!(g.is_clique(leaf));
            }
        }
    }

    #[test]
    fn minimal_separators_match_brute_force((n, mask) in graph_strategy(7)) {
        let g = graph_from_mask(n, mask);
        let found = minimal_separators(&g, 10_000);
        prop_assert!(!found.truncated);
        let mut got = found.separators.clone();
        got.sort();
        prop_assert_eq!(got, brute_minimal_separators(&g, g.vertices()));
    }
}

#[test]
fn random_chordal_graphs_are_recognised() {
    let mut r = common::rng(7);
    for n in 1..12 {
        let g = common::random_chordal_graph(&mut r, n);
        assert!(is_chordal(&g).is_chordal());
    }
}
