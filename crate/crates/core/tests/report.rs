mod common;

use raag_coherence::calculus::Rule;
use raag_coherence::report::{analyze, AnalysisOptions, AnalysisReport, Status};
use raag_coherence::{standard, SimplicialComplex};

fn flag_corpus() -> Vec<(String, SimplicialComplex)> {
    common::corpus().into_iter().filter(|(_, l)| l.is_flag()).collect()
}

#[test]
fn reports_round_trip_through_json() {
    for (name, l) in flag_corpus() {
        let r = analyze(&l, &AnalysisOptions::default()).unwrap();
        let back = AnalysisReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r, "{name}");
        assert_eq!(back.to_json(), r.to_json());
        let text = r.render_text();
        for row in &r.status {
            assert!(text.contains(&format!("{}", row.n)), "{name}");
        }
    }
}

#[test]
fn status_rows_are_monotone_and_match_chordality() {
    for (name, l) in flag_corpus() {
        let r = analyze(&l, &AnalysisOptions::default()).unwrap();
        assert_eq!(r.status.len() as u32, r.max_n);
        let first_positive = r.status.iter().position(|row| row.status == Status::Positive);
        if let Some(p) = first_positive {
            assert!(r.status[p..].iter().all(|row| row.status == Status::Positive), "{name}");
        }
        // (n,∞) at some n rules out failure of (n',n'+1) for every n' ≥ n
        let chordal = r.chordality.is_chordal();
        let expected = if chordal { Status::Positive } else { Status::Negative };
        assert_eq!(r.status_at(1), Some(expected), "{name}");
        // past the dimension every subgroup question is settled by geometric dimension
        let top = (l.dimension() + 1).max(1) as u32;
        assert_eq!(r.status_at(top), Some(Status::Positive), "{name}");
    }
}

#[test]
fn simplices_are_poly_cyclic() {
    for k in 0..5 {
        let r = analyze(&standard::simplex(k + 1), &AnalysisOptions::default()).unwrap();
        assert!(r.status.iter().all(|row| row.status == Status::Positive));
        assert_eq!(r.status[0].rule, Some(Rule::PolyCyclic));
    }
}

#[test]
fn truncated_scans_mark_reports_partial() {
    let l = standard::octahedron();
    let mut options = AnalysisOptions::default();
    options.scan.max_subsets = 3;
    let r = analyze(&l, &options).unwrap();
    assert!(r.partial);
    let full = analyze(&l, &AnalysisOptions::default()).unwrap();
    for (a, b) in r.status.iter().zip(&full.status) {
        // a truncated run may know less, never something different
        assert!(a.status == Status::Unknown || a.status == b.status);
    }
}
