mod common;

use proptest::prelude::*;

use raag_coherence::t1::{t1_certify, T1Outcome};
use raag_coherence::tn::{
    certify_tn, lift_t1_certificate, verify_tn_certificate, SearchBudget, TnCertificate, TnOutcome,
};
use raag_coherence::{ExtNat, SimplicialComplex};

fn budget(exhaustive: bool, memoise: bool) -> SearchBudget {
    SearchBudget {
        exhaustive_separators: exhaustive,
        memoise,
        ..SearchBudget::default()
    }
}

fn flag_corpus() -> Vec<(String, SimplicialComplex)> {
    let mut out: Vec<_> = common::corpus().into_iter().filter(|(_, l)| l.is_flag()).collect();
    let mut r = common::rng(4242);
    for i in 0..20 {
        out.push((format!("extra{i}"), common::random_flag(&mut r, 6 + i % 4, 0.55)));
    }
    out
}

#[test]
fn certificates_verify_on_corpus() {
    for (name, l) in flag_corpus() {
        for n in 2..=5 {
            for exhaustive in [false, true] {
                if exhaustive && l.vertex_count() > 9 {
                    continue;
                }
                let s = certify_tn(&l, ExtNat::Fin(n), budget(exhaustive, true)).unwrap();
                if let Some(cert) = s.outcome.certificate() {
                    verify_tn_certificate(cert, &l, ExtNat::Fin(n)).unwrap_or_else(|e| panic!("{name}, n={n}: {e}"));
                    let json = serde_json::to_string(cert).unwrap();
                    let back: TnCertificate = serde_json::from_str(&json).unwrap();
                    assert_eq!(&back, cert);
                }
            }
        }
    }
}

#[test]
fn certification_is_monotone_in_n() {
    for (name, l) in flag_corpus() {
        let certified: Vec<bool> = (2..=6)
            .map(|n| {
                certify_tn(&l, ExtNat::Fin(n), budget(false, true))
                    .unwrap()
                    .outcome
                    .is_certified()
            })
            .collect();
        for w in certified.windows(2) {
            assert!(!w[0] || w[1], "{name}: {certified:?}");
        }
    }
}

#[test]
fn chordal_complexes_are_certified_for_every_n() {
    let mut r = common::rng(11);
    for i in 0..30 {
        let g = common::random_chordal_graph(&mut r, 3 + i % 8);
        let l = SimplicialComplex::from_graph(&g);
        let T1Outcome::Certified { certificate } = t1_certify(&l).unwrap() else {
            panic!("chordal graph refuted");
        };
        for n in 2..=5 {
            let lifted = lift_t1_certificate(&certificate, n);
            verify_tn_certificate(&lifted, &l, ExtNat::Fin(n)).unwrap();
            assert!(certify_tn(&l, ExtNat::Fin(n), SearchBudget::default())
                .unwrap()
                .outcome
                .is_certified());
        }
    }
}

#[test]
fn memoisation_does_not_change_outcomes() {
    let mut r = common::rng(5);
    let mut cases: Vec<SimplicialComplex> = flag_corpus()
        .into_iter()
        .map(|(_, l)| l)
        .filter(|l| l.vertex_count() <= 8)
        .collect();
    for _ in 0..30 {
        cases.push(common::random_flag(&mut r, 7, 0.6));
    }
    for l in cases {
        for n in 2..=4 {
            for exhaustive in [false, true] {
                let with = certify_tn(&l, ExtNat::Fin(n), budget(exhaustive, true)).unwrap();
                let without = certify_tn(&l, ExtNat::Fin(n), budget(exhaustive, false)).unwrap();
                assert_eq!(with.outcome, without.outcome);
            }
        }
    }
}

#[test]
fn depth_limits_never_produce_unsound_certificates() {
    let mut r = common::rng(8);
    for _ in 0..30 {
        let l = common::random_flag(&mut r, 8, 0.6);
        for depth in 1..4 {
            let b = SearchBudget {
                max_depth: depth,
                ..SearchBudget::default()
            };
            let s = certify_tn(&l, ExtNat::Fin(2), b).unwrap();
            match &s.outcome {
                TnOutcome::Certified { certificate } => {
                    assert!(certificate.root.depth() <= depth);
                    verify_tn_certificate(certificate, &l, ExtNat::Fin(2)).unwrap();
                }
                TnOutcome::Exhausted | TnOutcome::BudgetExceeded => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn corrupted_certificates_are_rejected(seed in any::<u64>(), n in 2u32..=3) {
        let mut r = common::rng(seed);
        let l = common::random_flag(&mut r, 8, 0.55);
        let s = certify_tn(&l, ExtNat::Fin(n), SearchBudget::default()).unwrap();
        if let Some(cert) = s.outcome.certificate() {
            for _ in 0..25 {
                let bad = common::corrupt_tn(cert, l.vertex_count(), &mut r);
                prop_assert!(verify_tn_certificate(&bad, &l, ExtNat::Fin(n)).is_err(), "{:?}", bad);
            }
        }
    }
}
