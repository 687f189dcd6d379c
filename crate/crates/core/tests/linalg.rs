mod common;

use proptest::prelude::*;

use raag_coherence::linalg::{rank_rational, smith_form, SparseMatrix};

fn sparse(dense: &[Vec<i64>], cols: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(dense.len(), cols);
    for (r, row) in dense.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            if x != 0 {
                m.columns[c].push((r, x));
            }
        }
    }
    m
}

fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(prop::collection::vec(-4i64..=4, c), r)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_matches_rational_elimination((cols, dense) in matrix_strategy()) {
        prop_assert_eq!(rank_rational(&sparse(&dense, cols)), common::rational_rank(&dense));
    }

    #[test]
    fn smith_matches_determinantal_divisors((cols, dense) in matrix_strategy()) {
        let s = smith_form(&sparse(&dense, cols));
        prop_assert_eq!(s.invariant_factors, common::smith_by_minors(&dense));
    }
}

#[test]
fn large_entries_do_not_overflow() {
    let big = i64::MAX / 3;
    let dense = vec![vec![big, big - 1, 7], vec![big - 2, big, 11], vec![3, 5, big]];
    let m = sparse(&dense, 3);
    assert_eq!(rank_rational(&m), common::rational_rank(&dense));
    assert_eq!(smith_form(&m).invariant_factors, common::smith_by_minors(&dense));
}
