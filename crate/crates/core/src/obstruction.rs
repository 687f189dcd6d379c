//! Search for full subcomplexes that are `(n−1)`-connected but not `n`-connected.
//!
//! Such a subcomplex `K` makes the Bestvina–Brady kernel of `A_K` of type `Fₙ` but not
//! `Fₙ₊₁`; since `A_K` is a retract of `A_L`, the group `A_L` is then not
//! `(n, n+1)`-coherent. The converse is open, so an empty scan proves nothing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::connectivity::{ConnectivityProbe, Evidence, Tri, TriStatus};
use crate::error::{Error, Result};
use crate::pi1::DEFAULT_TIETZE_BUDGET;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanLimits {
    pub max_subsets: u64,
    pub pi1_budget: usize,
    /// Skip subsets too small to carry reduced homology in degree `n`.
    pub prune: bool,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            max_subsets: 1 << 20,
            pi1_budget: DEFAULT_TIETZE_BUDGET,
            prune: true,
        }
    }
}

/// A full subcomplex with certified `(n−1)`-connectivity and a certified failure of
/// `n`-connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub subset: VertexSet,
    pub labels: Vec<String>,
    pub n: u32,
    pub lower: TriStatus,
    pub upper: TriStatus,
}

/// A subset that would be an obstruction if an undecided π₁ turned out trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub subset: VertexSet,
    pub labels: Vec<String>,
    pub lower: TriStatus,
    pub upper: TriStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: u32,
    pub vertex_count: usize,
    pub obstructions: Vec<Obstruction>,
    pub candidates: Vec<Candidate>,
    /// Subsets enumerated, including the pruned ones.
    pub scanned: u64,
    pub pruned: u64,
    /// Whether all `2^|V|` subsets were enumerated.
    pub exhaustive: bool,
}

impl ScanReport {
    pub fn found(&self) -> bool {
        !self.obstructions.is_empty()
    }
}

enum Verdict {
    Pruned,
    Clear,
    Obstruction(TriStatus, TriStatus),
    Candidate(TriStatus, TriStatus),
}

/// Subsets of `0..n` by decreasing size, lexicographic within a size, at most `cap`.
pub fn subsets_by_size(n: usize, cap: u64) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for size in (0..=n).rev() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if out.len() as u64 >= cap {
                return out;
            }
            out.push(combo.iter().collect());
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

fn total_subsets(n: usize) -> Option<u64> {
    (n < 64).then(|| 1u64 << n)
}

/// Rewrites subcomplex-relative vertex indices in `evidence` to ambient indices.
fn lift_evidence(status: TriStatus, subset: &[usize]) -> TriStatus {
    let evidence = match status.evidence {
        Evidence::Cone { apex } => Evidence::Cone { apex: subset[apex] },
        e => e,
    };
    TriStatus { evidence, ..status }
}

fn classify(complex: &SimplicialComplex, subset: VertexSet, n: u32, limits: &ScanLimits) -> Verdict {
    if limits.prune && subset.len() < n as usize + 2 {
        return Verdict::Pruned;
    }
    let sub = complex.full_subcomplex(subset).expect("subset of vertices");
    let probe = ConnectivityProbe::new(&sub, limits.pi1_budget);
    let lower = probe.status(n as i32 - 1);
    if lower.status == Tri::No {
        return Verdict::Clear;
    }
    let upper = probe.status(n as i32);
    let idx = subset.to_vec();
    match (lower.status, upper.status) {
        (Tri::Yes, Tri::No) => Verdict::Obstruction(lift_evidence(lower, &idx), lift_evidence(upper, &idx)),
        // homology fails in degree n but π₁ is undecided
        (Tri::Unknown, Tri::No) | (Tri::Yes, Tri::Unknown) => {
            Verdict::Candidate(lift_evidence(lower, &idx), lift_evidence(upper, &idx))
        }
        _ => Verdict::Clear,
    }
}

/// Classifies full subcomplexes of `complex` at level `n ≥ 1`.
pub fn scan_obstructions(complex: &SimplicialComplex, n: u32, limits: ScanLimits) -> Result<ScanReport> {
    complex.require_flag()?;
    if n < 1 {
        return Err(Error::Precondition("obstruction scans need n ≥ 1".into()));
    }
    let v = complex.vertex_count();
    let subsets = subsets_by_size(v, limits.max_subsets);
    let verdicts: Vec<Verdict> = subsets.par_iter().map(|&s| classify(complex, s, n, &limits)).collect();

    let labels_of = |s: VertexSet| s.iter().map(|i| complex.labels()[i].clone()).collect();
    let mut report = ScanReport {
        n,
        vertex_count: v,
        obstructions: Vec::new(),
        candidates: Vec::new(),
        scanned: subsets.len() as u64,
        pruned: 0,
        exhaustive: total_subsets(v) == Some(subsets.len() as u64),
    };
    for (subset, verdict) in subsets.into_iter().zip(verdicts) {
        match verdict {
            Verdict::Pruned => report.pruned += 1,
            Verdict::Clear => {}
            Verdict::Obstruction(lower, upper) => report.obstructions.push(Obstruction {
                subset,
                labels: labels_of(subset),
                n,
                lower,
                upper,
            }),
            Verdict::Candidate(lower, upper) => report.candidates.push(Candidate {
                subset,
                labels: labels_of(subset),
                lower,
                upper,
            }),
        }
    }
    Ok(report)
}
