//! The end-to-end analysis of a flag complex `L` and the coherence of `A_L`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::calculus::{derive_facts, AnalysisBudget, CoherencePair, GroupExpr, Rule, TraceStep};
use crate::chordal::{is_chordal, Chordality};
use crate::complex::SimplicialComplex;
use crate::connectivity::{bb_finiteness, BbFiniteness, Tri};
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::homology::{integral_homology, HomologySummary};
use crate::obstruction::{ScanLimits, ScanReport};
use crate::t1::{t1_certify, T1Outcome};
use crate::tn::{SearchBudget, TnOutcome, TnSearch};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Defaults to `dim L + 1`.
    pub max_n: Option<u32>,
    pub tn: SearchBudget,
    pub scan: ScanLimits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexMetadata {
    pub vertices: Vec<String>,
    pub edge_count: usize,
    pub facets: Vec<Vec<String>>,
    pub dimension: i32,
    pub flag: bool,
    pub f_vector: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Positive,
    Negative,
    Unknown,
}

/// Coherence status of `A_L` at level `n`: `(n,∞)` holds, `(n,n+1)` fails, or neither
/// is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusRow {
    pub n: u32,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<CoherencePair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactsSummary {
    pub group: String,
    pub positive: Vec<CoherencePair>,
    pub negative: Vec<CoherencePair>,
    pub finiteness: ExtNat,
    pub traces: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub complex: ComplexMetadata,
    pub max_n: u32,
    pub chordality: Chordality,
    pub t1: T1Outcome,
    pub homology: HomologySummary,
    pub bb_finiteness: BbFiniteness,
    pub tn: Vec<TnSearch>,
    pub scans: Vec<ScanReport>,
    pub facts: FactsSummary,
    pub status: Vec<StatusRow>,
    /// Set when some search hit a budget, so unknown rows may be resolvable.
    pub partial: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Runs every analysis on `complex`, which must be flag.
pub fn analyze(complex: &SimplicialComplex, options: &AnalysisOptions) -> Result<AnalysisReport> {
    complex.require_flag()?;
    let dimension = complex.dimension();
    let max_n = options.max_n.unwrap_or((dimension + 1).max(1) as u32).max(1);
    let g = complex.one_skeleton();
    let labels = complex.labels();
    let metadata = ComplexMetadata {
        vertices: labels.to_vec(),
        edge_count: g.edge_count(),
        facets: complex
            .facets()
            .iter()
            .map(|f| f.iter().map(|i| labels[i].clone()).collect())
            .collect(),
        dimension,
        flag: complex.is_flag(),
        f_vector: complex.f_vector(),
    };
    let budget = AnalysisBudget {
        max_n: Some(max_n),
        tn: options.tn,
        scan: options.scan,
    };
    let ((chordality, t1), (homology, (bb, derivation))) = rayon::join(
        || (is_chordal(&g), t1_certify(complex).expect("flag")),
        || {
            rayon::join(
                || integral_homology(complex),
                || {
                    let bb = bb_finiteness(complex, max_n, options.scan.pi1_budget).expect("max_n ≥ 1");
                    let d = derive_facts(&GroupExpr::raag("L", complex.clone()), &budget);
                    (bb, d)
                },
            )
        },
    );
    if let Err((node, c)) = derivation.check_consistency() {
        return Err(Error::Inconsistent(format!(
            "{node}: positive {} (trace {}) against negative {} (trace {})",
            c.positive, c.positive_trace, c.negative, c.negative_trace
        )));
    }
    let status = (1..=max_n)
        .map(|n| {
            if let Some(t) = derivation.positive_trace(CoherencePair::to_infinity(n)) {
                StatusRow {
                    n,
                    status: Status::Positive,
                    pair: Some(CoherencePair::to_infinity(n)),
                    rule: Some(t.rule),
                    trace: Some(t.id),
                }
            } else if let Some(t) = derivation.negative_trace(CoherencePair::step(n)) {
                StatusRow {
                    n,
                    status: Status::Negative,
                    pair: Some(CoherencePair::step(n)),
                    rule: Some(t.rule),
                    trace: Some(t.id),
                }
            } else {
                StatusRow {
                    n,
                    status: Status::Unknown,
                    pair: None,
                    rule: None,
                    trace: None,
                }
            }
        })
        .collect();
    let analysis = derivation.root_analysis().expect("raag root");
    Ok(AnalysisReport {
        complex: metadata,
        max_n,
        chordality,
        t1,
        homology,
        bb_finiteness: bb,
        tn: analysis.tn.clone(),
        scans: analysis.scans.clone(),
        facts: FactsSummary {
            group: "A_L".into(),
            positive: derivation.positive.clone(),
            negative: derivation.negative.clone(),
            finiteness: derivation.finiteness,
            traces: derivation.traces.clone(),
        },
        status,
        partial: derivation.incomplete,
        notes: derivation
            .notes
            .iter()
            .map(|n| n.trim_start_matches("G: ").to_string())
            .collect(),
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json {
            path: "report".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn status_at(&self, n: u32) -> Option<Status> {
        self.status.iter().find(|r| r.n == n).map(|r| r.status)
    }

    /// Human-readable summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let c = &self.complex;
        let _ = writeln!(
            out,
            "complex: {} vertices, {} edges, {} facets, dimension {}{}",
            c.vertices.len(),
            c.edge_count,
            c.facets.len(),
            c.dimension,
            if c.flag { ", flag" } else { "" }
        );
        let _ = writeln!(out, "f-vector: {:?}", c.f_vector);
        match &self.chordality {
            Chordality::Yes { .. } => {
                let _ = writeln!(out, "1-skeleton: chordal");
            }
            Chordality::No { cycle } => {
                let names: Vec<&str> = cycle.0.iter().map(|&i| c.vertices[i].as_str()).collect();
                let _ = writeln!(out, "1-skeleton: not chordal (induced cycle {})", names.join(" "));
            }
        }
        let _ = writeln!(out, "reduced Betti numbers: {:?}", self.homology.reduced_betti());
        for d in &self.homology.degrees {
            if let Some(t) = d.torsion.as_ref().filter(|t| !t.is_empty()) {
                let _ = writeln!(out, "torsion in degree {}: {}", d.degree, t.join(", "));
            }
        }
        let _ = writeln!(out, "Euler characteristic: {}", self.homology.euler_characteristic);
        let fin: Vec<String> = self
            .bb_finiteness
            .types
            .iter()
            .map(|e| format!("F{}={}", e.n, tri_word(e.status.status)))
            .collect();
        let _ = writeln!(out, "Bestvina-Brady kernel: {}", fin.join(" "));
        for s in &self.tn {
            let word = match &s.outcome {
                TnOutcome::Certified { certificate } => format!("certified ({})", certificate.root.rule_name()),
                TnOutcome::Exhausted => "no certificate found by this strategy".into(),
                TnOutcome::BudgetExceeded => "search budget exceeded".into(),
            };
            let _ = writeln!(out, "T_{}: {word}", s.n);
        }
        for r in &self.scans {
            let head = match r.obstructions.first() {
                Some(o) => format!("obstruction on {{{}}}", o.labels.join(", ")),
                None => "no obstruction found".into(),
            };
            let _ = writeln!(
                out,
                "scan n={}: {head} ({} subsets{}, {} undecided)",
                r.n,
                r.scanned,
                if r.exhaustive { ", exhaustive" } else { "" },
                r.candidates.len()
            );
        }
        let _ = writeln!(out, "coherence of A_L:");
        for row in &self.status {
            let line = match (row.status, row.pair, row.rule) {
                (Status::Positive, Some(p), Some(rule)) => format!("{p}-coherent [{}]", rule_word(rule)),
                (Status::Negative, Some(p), Some(rule)) => format!("not {p}-coherent [{}]", rule_word(rule)),
                _ => "unknown".into(),
            };
            let _ = writeln!(out, "  n={}: {line}", row.n);
        }
        if self.partial {
            let _ = writeln!(out, "partial: some searches were truncated");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn tri_word(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    }
}

fn rule_word(rule: Rule) -> String {
    serde_json::to_value(rule)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
