//! Forward chaining over coherence facts with replayable proof traces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chordal::{is_chordal, Chordality, InducedCycleWitness, PerfectEliminationOrder};
use crate::complex::SimplicialComplex;
use crate::connectivity::{connectivity_status_with_budget, Tri};
use crate::extnat::ExtNat;
use crate::homology::betti_rational;
use crate::obstruction::{scan_obstructions, Obstruction, ScanLimits, ScanReport};
use crate::tn::{certify_tn, verify_tn_certificate, SearchBudget, TnCertificate, TnOutcome, TnSearch};

use super::expr::{GroupExpr, NamedComplex};
use super::pair::{maximal_pairs, minimal_negatives, pair_grid, CoherencePair};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisBudget {
    /// Largest `n` examined by the `𝒯ₙ` and obstruction searches; `dim L + 1` if unset.
    pub max_n: Option<u32>,
    pub tn: SearchBudget,
    pub scan: ScanLimits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    PolyCyclic,
    GeometricDimension,
    ChordalRaag,
    NonChordalRaag,
    FreePower,
    TopBettiVanishing,
    TnMembership,
    BbObstruction,
    KarrassSolitar,
    GraphOfGroups,
    ExtensionFromQuotient,
    ExtensionToQuotient,
    Assumption,
}

impl Rule {
    pub fn statement(self) -> &'static str {
        match self {
            Rule::PolyCyclic => "virtually poly-cyclic groups are (0,∞)-coherent",
            Rule::GeometricDimension => {
                "a group of geometric dimension d is (d,∞)-coherent; gd A_L = dim L + 1 and gd F_k = 1"
            }
            Rule::ChordalRaag => {
                "for chordal L every finitely generated subgroup of A_L is again a right-angled Artin group, hence of type F∞"
            }
            Rule::NonChordalRaag => "A_L is incoherent when the 1-skeleton of L has an induced cycle of length at least 4",
            Rule::FreePower => "(F₂)^k is (k,∞)-coherent and not (n,n+1)-coherent for n < k",
            Rule::TopBettiVanishing => {
                "dim L = n ≥ 2 with Hₙ(L;ℚ) = 0 gives cd A_L = n+1 and vanishing top ℓ²-Betti number, so A_L is (n,∞)-coherent"
            }
            Rule::TnMembership => "A_L is (n,∞)-coherent whenever L lies in 𝒯ₙ",
            Rule::BbObstruction => {
                "an (n−1)-connected full subcomplex that is not n-connected gives a subgroup of type Fₙ but not Fₙ₊₁"
            }
            Rule::KarrassSolitar => {
                "an amalgam of coherent groups over a group whose subgroups are all finitely generated is coherent"
            }
            Rule::GraphOfGroups => {
                "a finite graph of groups with (n,m)-coherent vertex groups and (0,m−1)-coherent (n = 1) or (1,m−1)-coherent (n ≥ 2) edge groups is (n,m)-coherent"
            }
            Rule::ExtensionFromQuotient => "in 1→N→G→Q→1, Q (n,m)-coherent and N (0,m)-coherent give G (n,m)-coherent",
            Rule::ExtensionToQuotient => "in 1→N→G→Q→1, G (n,m)-coherent and N of type F_{m−1} give Q (n,m)-coherent",
            Rule::Assumption => "taken as an assumption",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEvidence {
    Dimension { dimension: i32 },
    Chordal { order: PerfectEliminationOrder },
    InducedCycle { cycle: InducedCycleWitness },
    TopBetti { dimension: i32, betti: usize },
    TnCertificate { certificate: TnCertificate },
    Obstruction { obstruction: Box<Obstruction> },
    KernelFiniteness { node: String, finiteness: ExtNat },
    FreeFactors { count: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub id: usize,
    pub node: String,
    pub group: String,
    pub polarity: Polarity,
    pub pair: CoherencePair,
    pub rule: Rule,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<TraceEvidence>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub pair: CoherencePair,
    pub trace: usize,
}

/// Facts about one group; positives and negatives are read up to monotonicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactSet {
    pub positive: Vec<Fact>,
    pub negative: Vec<Fact>,
    /// Greatest `n` for which the group is known to be of type `Fₙ`.
    pub finiteness: ExtNat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    pub positive: CoherencePair,
    pub negative: CoherencePair,
    pub positive_trace: usize,
    pub negative_trace: usize,
}

impl FactSet {
    pub fn new(finiteness: ExtNat) -> Self {
        FactSet {
            positive: Vec::new(),
            negative: Vec::new(),
            finiteness,
        }
    }

    /// A recorded positive fact implying `pair`.
    pub fn positive_for(&self, pair: CoherencePair) -> Option<&Fact> {
        self.positive.iter().find(|f| f.pair.implies(pair))
    }

    /// A recorded negative fact implying that `pair` fails.
    pub fn negative_for(&self, pair: CoherencePair) -> Option<&Fact> {
        self.negative.iter().find(|f| pair.implies(f.pair))
    }

    pub fn positive_pairs(&self) -> Vec<CoherencePair> {
        maximal_pairs(&self.positive.iter().map(|f| f.pair).collect::<Vec<_>>())
    }

    pub fn negative_pairs(&self) -> Vec<CoherencePair> {
        minimal_negatives(&self.negative.iter().map(|f| f.pair).collect::<Vec<_>>())
    }
}

/// Finds a positive fact whose monotone closure contains a negative one.
pub fn check_consistency(facts: &FactSet) -> Result<(), Contradiction> {
    for p in &facts.positive {
        if let Some(q) = facts.negative.iter().find(|q| p.pair.implies(q.pair)) {
            return Err(Contradiction {
                positive: p.pair,
                negative: q.pair,
                positive_trace: p.trace,
                negative_trace: q.trace,
            });
        }
    }
    Ok(())
}

/// Per-complex computations backing the rules for `A_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaagAnalysis {
    pub max_n: u32,
    pub dimension: i32,
    pub chordality: Chordality,
    /// Rational Betti number of `L` in its top degree.
    pub top_betti: usize,
    /// `𝒯ₙ` searches for `n = 2..=max_n`.
    pub tn: Vec<TnSearch>,
    /// Obstruction scans for `n = 1..=min(max_n, dim L)`.
    pub scans: Vec<ScanReport>,
}

impl RaagAnalysis {
    pub fn compute(complex: &SimplicialComplex, budget: &AnalysisBudget) -> Self {
        let dimension = complex.dimension();
        let max_n = budget.max_n.unwrap_or((dimension + 1).max(1) as u32);
        let g = complex.one_skeleton();
        let chordality = is_chordal(&g);
        let top_betti = if dimension >= 0 {
            betti_rational(complex).degrees[dimension as usize].betti
        } else {
            0
        };
        let scan_top = max_n.min(dimension.max(0) as u32);
        let (tn, scans) = rayon::join(
            || {
                (2..=max_n)
                    .into_par_iter()
                    .map(|n| certify_tn(complex, ExtNat::Fin(n), budget.tn).expect("flag complex, n ≥ 2"))
                    .collect::<Vec<_>>()
            },
            || {
                (1..=scan_top)
                    .into_par_iter()
                    .map(|n| scan_obstructions(complex, n, budget.scan).expect("flag complex, n ≥ 1"))
                    .collect::<Vec<_>>()
            },
        );
        RaagAnalysis {
            max_n,
            dimension,
            chordality,
            top_betti,
            tn,
            scans,
        }
    }

    /// Reasons the analysis may have missed facts.
    pub fn truncations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.tn {
            if s.outcome == TnOutcome::BudgetExceeded {
                out.push(format!("𝒯_{} search hit its budget", s.n));
            }
        }
        for r in &self.scans {
            if !r.exhaustive {
                out.push(format!(
                    "obstruction scan at n = {} covered {} subsets only",
                    r.n, r.scanned
                ));
            }
            if !r.candidates.is_empty() {
                out.push(format!(
                    "obstruction scan at n = {} left {} subsets undecided (π₁)",
                    r.n,
                    r.candidates.len()
                ));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Leaf,
    Product { factors: Vec<usize> },
    Amalgam { left: usize, right: usize, edge: usize },
    GraphOfGroups { vertices: Vec<usize>, edges: Vec<usize> },
    Extension { kernel: usize, quotient: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupNode {
    pub path: String,
    pub group: String,
    #[serde(skip)]
    pub expr: GroupExpr,
    #[serde(skip)]
    pub complex: Option<NamedComplex>,
    #[serde(flatten)]
    pub shape: Shape,
    pub parent: Option<usize>,
    pub facts: FactSet,
    #[serde(skip)]
    pub raag: Option<RaagAnalysis>,
}

/// Result of [`derive_facts`]: node 0 is the whole group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub group: String,
    pub positive: Vec<CoherencePair>,
    pub negative: Vec<CoherencePair>,
    pub finiteness: ExtNat,
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub nodes: Vec<GroupNode>,
    pub traces: Vec<TraceStep>,
    #[serde(skip)]
    bound: u32,
}

/// Greatest `n` with the (normalised) group certainly of type `Fₙ`.
pub fn finiteness_of(e: &GroupExpr) -> ExtNat {
    match e {
        GroupExpr::Trivial | GroupExpr::FreeAbelian(_) | GroupExpr::Free(_) | GroupExpr::Raag(_) => ExtNat::Inf,
        GroupExpr::DirectProduct(children) => children.iter().map(finiteness_of).min().unwrap_or(ExtNat::Inf),
        GroupExpr::AmalgamOverRaag { left, right, .. } => finiteness_of(left).min(finiteness_of(right)),
        GroupExpr::GraphOfGroups { vertices, edges } => vertices
            .iter()
            .map(finiteness_of)
            .chain(edges.iter().map(|e| finiteness_of(e).succ()))
            .min()
            .unwrap_or(ExtNat::Inf),
        GroupExpr::Extension { kernel, quotient } => finiteness_of(kernel).min(finiteness_of(quotient)),
        GroupExpr::Assumed { facts, .. } => facts.finiteness.unwrap_or(ExtNat::ZERO),
    }
}

fn free_factor_count(e: &GroupExpr) -> Option<u32> {
    match e {
        GroupExpr::Free(k) if *k >= 2 => Some(1),
        GroupExpr::DirectProduct(children) if !children.is_empty() => children
            .iter()
            .all(|c| matches!(c, GroupExpr::Free(k) if *k >= 2))
            .then_some(children.len() as u32),
        _ => None,
    }
}

fn finite_values(e: &GroupExpr, out: &mut Vec<u32>) {
    let mut push_pair = |p: &CoherencePair| {
        out.extend(p.n.finite());
        out.extend(p.m.finite());
    };
    match e {
        GroupExpr::Assumed { facts, .. } => {
            facts.positive.iter().for_each(&mut push_pair);
            facts.negative.iter().for_each(&mut push_pair);
            out.extend(facts.finiteness.and_then(ExtNat::finite));
        }
        GroupExpr::DirectProduct(c) => {
            out.push(c.len() as u32);
            c.iter().for_each(|x| finite_values(x, out));
        }
        GroupExpr::AmalgamOverRaag { left, right, .. } => {
            finite_values(left, out);
            finite_values(right, out);
        }
        GroupExpr::GraphOfGroups { vertices, edges } => {
            vertices.iter().chain(edges).for_each(|x| finite_values(x, out));
        }
        GroupExpr::Extension { kernel, quotient } => {
            finite_values(kernel, out);
            finite_values(quotient, out);
        }
        _ => {}
    }
}

struct Engine {
    nodes: Vec<GroupNode>,
    traces: Vec<TraceStep>,
    bound: u32,
}

impl Engine {
    fn build(e: &GroupExpr) -> Engine {
        let mut engine = Engine {
            nodes: Vec::new(),
            traces: Vec::new(),
            bound: 0,
        };
        engine.add_node(e, "G".to_string(), None);
        engine
    }

    fn add_node(&mut self, e: &GroupExpr, path: String, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GroupNode {
            path: path.clone(),
            group: e.to_string(),
            expr: e.clone(),
            complex: match e {
                GroupExpr::Raag(c) => Some(c.clone()),
                _ => None,
            },
            shape: Shape::Leaf,
            parent,
            facts: FactSet::new(finiteness_of(e)),
            raag: None,
        });
        let shape = match e {
            GroupExpr::DirectProduct(children) => Shape::Product {
                factors: children
                    .iter()
                    .enumerate()
                    .map(|(i, c)| self.add_node(c, format!("{path}.{i}"), Some(id)))
                    .collect(),
            },
            GroupExpr::AmalgamOverRaag { left, right, over } => Shape::Amalgam {
                left: self.add_node(left, format!("{path}.left"), Some(id)),
                right: self.add_node(right, format!("{path}.right"), Some(id)),
                edge: self.add_node(&GroupExpr::Raag(over.clone()), format!("{path}.over"), Some(id)),
            },
            GroupExpr::GraphOfGroups { vertices, edges } => Shape::GraphOfGroups {
                vertices: vertices
                    .iter()
                    .enumerate()
                    .map(|(i, c)| self.add_node(c, format!("{path}.v{i}"), Some(id)))
                    .collect(),
                edges: edges
                    .iter()
                    .enumerate()
                    .map(|(i, c)| self.add_node(c, format!("{path}.e{i}"), Some(id)))
                    .collect(),
            },
            GroupExpr::Extension { kernel, quotient } => Shape::Extension {
                kernel: self.add_node(kernel, format!("{path}.kernel"), Some(id)),
                quotient: self.add_node(quotient, format!("{path}.quotient"), Some(id)),
            },
            _ => Shape::Leaf,
        };
        self.nodes[id].shape = shape;
        id
    }

    fn add(
        &mut self,
        node: usize,
        polarity: Polarity,
        pair: CoherencePair,
        rule: Rule,
        premises: Vec<usize>,
        evidence: Option<TraceEvidence>,
    ) -> bool {
        let facts = &self.nodes[node].facts;
        let known = match polarity {
            Polarity::Positive => facts.positive_for(pair).is_some(),
            Polarity::Negative => facts.negative_for(pair).is_some(),
        };
        if known {
            return false;
        }
        let id = self.traces.len();
        self.traces.push(TraceStep {
            id,
            node: self.nodes[node].path.clone(),
            group: self.nodes[node].group.clone(),
            polarity,
            pair,
            rule,
            statement: rule.statement().to_string(),
            premises,
            evidence,
        });
        let fact = Fact { pair, trace: id };
        let facts = &mut self.nodes[node].facts;
        match polarity {
            Polarity::Positive => facts.positive.push(fact),
            Polarity::Negative => facts.negative.push(fact),
        }
        true
    }

    fn pos(
        &mut self,
        node: usize,
        pair: CoherencePair,
        rule: Rule,
        premises: Vec<usize>,
        evidence: Option<TraceEvidence>,
    ) -> bool {
        self.add(node, Polarity::Positive, pair, rule, premises, evidence)
    }

    fn neg(&mut self, node: usize, pair: CoherencePair, rule: Rule, evidence: Option<TraceEvidence>) -> bool {
        self.add(node, Polarity::Negative, pair, rule, Vec::new(), evidence)
    }

    fn premise(&self, node: usize, pair: CoherencePair) -> Option<usize> {
        self.nodes[node].facts.positive_for(pair).map(|f| f.trace)
    }

    fn round(&mut self) -> bool {
        let mut changed = false;
        for id in (0..self.nodes.len()).rev() {
            changed |= self.apply(id);
        }
        changed
    }

    fn apply(&mut self, id: usize) -> bool {
        let mut changed = false;
        let expr = self.nodes[id].expr.clone();
        match &expr {
            GroupExpr::Trivial | GroupExpr::FreeAbelian(_) => {
                changed |= self.pos(id, CoherencePair::to_infinity(0), Rule::PolyCyclic, vec![], None);
            }
            GroupExpr::Free(_) => {
                changed |= self.pos(
                    id,
                    CoherencePair::to_infinity(1),
                    Rule::GeometricDimension,
                    vec![],
                    None,
                );
            }
            GroupExpr::Raag(_) => changed |= self.apply_raag(id),
            GroupExpr::Assumed { facts, .. } => {
                for &p in &facts.positive {
                    changed |= self.pos(id, p, Rule::Assumption, vec![], None);
                }
                for &p in &facts.negative {
                    changed |= self.neg(id, p, Rule::Assumption, None);
                }
            }
            _ => {}
        }
        if let Some(k) = free_factor_count(&expr) {
            let evidence = Some(TraceEvidence::FreeFactors { count: k });
            changed |= self.pos(
                id,
                CoherencePair::to_infinity(k),
                Rule::FreePower,
                vec![],
                evidence.clone(),
            );
            for n in 0..k {
                changed |= self.neg(id, CoherencePair::step(n), Rule::FreePower, evidence.clone());
            }
        }
        let grid = pair_grid(self.bound);
        match self.nodes[id].shape.clone() {
            Shape::Amalgam { left, right, edge } => {
                let (l, r, e) = (
                    self.premise(left, CoherencePair::step(1)),
                    self.premise(right, CoherencePair::step(1)),
                    self.premise(edge, CoherencePair::step(0)),
                );
                if let (Some(l), Some(r), Some(e)) = (l, r, e) {
                    changed |= self.pos(id, CoherencePair::step(1), Rule::KarrassSolitar, vec![l, r, e], None);
                }
                for &p in &grid {
                    changed |= self.combine(id, &[left, right], &[edge], p);
                }
            }
            Shape::GraphOfGroups { vertices, edges } => {
                for &p in &grid {
                    changed |= self.combine(id, &vertices, &edges, p);
                }
            }
            Shape::Extension { kernel, quotient } => {
                for &p in &grid {
                    if self.nodes[id].facts.positive_for(p).is_none() {
                        let q = self.premise(quotient, p);
                        let k = CoherencePair::new(0, p.m).and_then(|kp| self.premise(kernel, kp));
                        if let (Some(q), Some(k)) = (q, k) {
                            changed |= self.pos(id, p, Rule::ExtensionFromQuotient, vec![q, k], None);
                        }
                    }
                    let fin = self.nodes[kernel].facts.finiteness;
                    if self.nodes[quotient].facts.positive_for(p).is_none() && fin >= p.m.pred() {
                        if let Some(g) = self.premise(id, p) {
                            let evidence = TraceEvidence::KernelFiniteness {
                                node: self.nodes[kernel].path.clone(),
                                finiteness: fin,
                            };
                            changed |= self.pos(quotient, p, Rule::ExtensionToQuotient, vec![g], Some(evidence));
                        }
                    }
                }
            }
            _ => {}
        }
        changed
    }

    fn combine(&mut self, id: usize, vertices: &[usize], edges: &[usize], p: CoherencePair) -> bool {
        let Some(n) = p.n.finite() else { return false };
        if n == 0 || self.nodes[id].facts.positive_for(p).is_some() {
            return false;
        }
        let edge_pair = CoherencePair::new(if n == 1 { 0 } else { 1 }, p.m.pred()).expect("m−1 > edge n");
        let mut premises = Vec::new();
        for &v in vertices {
            let Some(t) = self.premise(v, p) else { return false };
            premises.push(t);
        }
        for &e in edges {
            let Some(t) = self.premise(e, edge_pair) else {
                return false;
            };
            premises.push(t);
        }
        self.pos(id, p, Rule::GraphOfGroups, premises, None)
    }

    fn apply_raag(&mut self, id: usize) -> bool {
        let mut changed = false;
        let complex = self.nodes[id].complex.clone().expect("raag node").complex;
        let analysis = self.nodes[id].raag.clone().expect("analysed");
        let dim = analysis.dimension;
        if complex.is_empty() || complex.is_simplex() {
            let evidence = Some(TraceEvidence::Dimension { dimension: dim });
            changed |= self.pos(id, CoherencePair::to_infinity(0), Rule::PolyCyclic, vec![], evidence);
        }
        match &analysis.chordality {
            Chordality::Yes { order } => {
                let evidence = Some(TraceEvidence::Chordal { order: order.clone() });
                changed |= self.pos(id, CoherencePair::to_infinity(1), Rule::ChordalRaag, vec![], evidence);
            }
            Chordality::No { cycle } => {
                let evidence = Some(TraceEvidence::InducedCycle { cycle: cycle.clone() });
                changed |= self.neg(id, CoherencePair::step(1), Rule::NonChordalRaag, evidence);
            }
        }
        let gd = (dim + 1).max(0) as u32;
        let evidence = Some(TraceEvidence::Dimension { dimension: dim });
        changed |= self.pos(
            id,
            CoherencePair::to_infinity(gd),
            Rule::GeometricDimension,
            vec![],
            evidence,
        );
        if dim >= 2 && analysis.top_betti == 0 {
            let evidence = Some(TraceEvidence::TopBetti {
                dimension: dim,
                betti: 0,
            });
            changed |= self.pos(
                id,
                CoherencePair::to_infinity(dim as u32),
                Rule::TopBettiVanishing,
                vec![],
                evidence,
            );
        }
        for search in &analysis.tn {
            if let Some(cert) = search.outcome.certificate() {
                let evidence = Some(TraceEvidence::TnCertificate {
                    certificate: cert.clone(),
                });
                changed |= self.pos(
                    id,
                    CoherencePair::to_infinity(search.n),
                    Rule::TnMembership,
                    vec![],
                    evidence,
                );
            }
        }
        for scan in &analysis.scans {
            if let Some(ob) = scan.obstructions.first() {
                let evidence = Some(TraceEvidence::Obstruction {
                    obstruction: Box::new(ob.clone()),
                });
                changed |= self.neg(id, CoherencePair::step(scan.n), Rule::BbObstruction, evidence);
            }
        }
        changed
    }

    fn into_derivation(self) -> Derivation {
        let root = &self.nodes[0];
        let mut notes = Vec::new();
        for node in &self.nodes {
            if let Some(a) = &node.raag {
                notes.extend(a.truncations().into_iter().map(|t| format!("{}: {t}", node.path)));
            }
        }
        Derivation {
            group: root.group.clone(),
            positive: root.facts.positive_pairs(),
            negative: root.facts.negative_pairs(),
            finiteness: root.facts.finiteness,
            incomplete: !notes.is_empty(),
            notes,
            nodes: self.nodes,
            traces: self.traces,
            bound: self.bound,
        }
    }
}

/// Derives coherence facts for `e` (and all its parts) by forward chaining to a fixpoint.
pub fn derive_facts(e: &GroupExpr, budget: &AnalysisBudget) -> Derivation {
    let mut engine = Engine::build(&e.normalise());
    let analyses: Vec<(usize, RaagAnalysis)> = engine
        .nodes
        .par_iter()
        .enumerate()
        .filter_map(|(i, n)| {
            n.complex
                .as_ref()
                .map(|c| (i, RaagAnalysis::compute(&c.complex, budget)))
        })
        .collect();
    let mut values = vec![2];
    finite_values(&engine.nodes[0].expr, &mut values);
    for (i, a) in analyses {
        values.push(a.max_n);
        values.push((a.dimension + 1).max(0) as u32);
        engine.nodes[i].raag = Some(a);
    }
    engine.bound = values.into_iter().max().unwrap_or(2) + 1;
    while engine.round() {}
    engine.into_derivation()
}

impl Derivation {
    pub fn root(&self) -> &FactSet {
        &self.nodes[0].facts
    }

    pub fn root_analysis(&self) -> Option<&RaagAnalysis> {
        self.nodes[0].raag.as_ref()
    }

    /// Trace establishing `(n,m)`-coherence of the whole group, if derived.
    pub fn positive_trace(&self, pair: CoherencePair) -> Option<&TraceStep> {
        self.root().positive_for(pair).map(|f| &self.traces[f.trace])
    }

    pub fn negative_trace(&self, pair: CoherencePair) -> Option<&TraceStep> {
        self.root().negative_for(pair).map(|f| &self.traces[f.trace])
    }

    /// Checks every node's facts for a positive whose closure contains a negative.
    pub fn check_consistency(&self) -> Result<(), (String, Contradiction)> {
        for node in &self.nodes {
            check_consistency(&node.facts).map_err(|c| (node.path.clone(), c))?;
        }
        Ok(())
    }

    /// Whether one more round of every rule adds nothing.
    pub fn is_fixpoint(&self) -> bool {
        let mut engine = Engine {
            nodes: self.nodes.clone(),
            traces: self.traces.clone(),
            bound: self.bound,
        };
        !engine.round()
    }

    /// Replays every trace step: premises come earlier and imply what the rule needs,
    /// and the rule's side conditions hold when recomputed from the expression.
    pub fn verify(&self) -> Result<(), String> {
        for step in &self.traces {
            self.verify_step(step)
                .map_err(|e| format!("trace {} ({:?} at {}): {e}", step.id, step.rule, step.node))?;
        }
        Ok(())
    }

    fn node_index(&self, path: &str) -> Result<usize, String> {
        self.nodes
            .iter()
            .position(|n| n.path == path)
            .ok_or_else(|| format!("no node {path}"))
    }

    fn require_premise(&self, step: &TraceStep, k: usize, node: usize, pair: CoherencePair) -> Result<(), String> {
        let id = *step.premises.get(k).ok_or("missing premise")?;
        if id >= step.id {
            return Err("premise is not earlier".into());
        }
        let p = &self.traces[id];
        if p.node != self.nodes[node].path || p.polarity != Polarity::Positive || !p.pair.implies(pair) {
            return Err(format!(
                "premise {id} does not give {pair} for {}",
                self.nodes[node].path
            ));
        }
        Ok(())
    }

    fn verify_step(&self, step: &TraceStep) -> Result<(), String> {
        let idx = self.node_index(&step.node)?;
        let node = &self.nodes[idx];
        let pair = step.pair;
        let positive = step.polarity == Polarity::Positive;
        let complex = node.complex.as_ref().map(|c| c.complex.as_ref());
        let expect = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        let raag = || complex.ok_or_else(|| "not a right-angled Artin group".to_string());
        match step.rule {
            Rule::PolyCyclic => {
                let ok = match &node.expr {
                    GroupExpr::Trivial | GroupExpr::FreeAbelian(_) => true,
                    GroupExpr::Raag(c) => c.complex.is_empty() || c.complex.is_simplex(),
                    _ => false,
                };
                expect(
                    ok && positive && pair == CoherencePair::to_infinity(0),
                    "not poly-cyclic",
                )
            }
            Rule::GeometricDimension => {
                let gd = match &node.expr {
                    GroupExpr::Free(_) => 1,
                    GroupExpr::Raag(c) => (c.complex.dimension() + 1).max(0) as u32,
                    _ => return Err("no geometric dimension bound".into()),
                };
                expect(positive && pair == CoherencePair::to_infinity(gd), "wrong dimension")
            }
            Rule::ChordalRaag => {
                let g = raag()?.one_skeleton();
                let Some(TraceEvidence::Chordal { order }) = &step.evidence else {
                    return Err("missing elimination order".into());
                };
                expect(
                    positive && pair == CoherencePair::to_infinity(1) && order.verify(&g, g.vertices()),
                    "elimination order does not verify",
                )
            }
            Rule::NonChordalRaag => {
                let g = raag()?.one_skeleton();
                let Some(TraceEvidence::InducedCycle { cycle }) = &step.evidence else {
                    return Err("missing induced cycle".into());
                };
                expect(
                    !positive && pair == CoherencePair::step(1) && cycle.verify(&g, g.vertices()),
                    "induced cycle does not verify",
                )
            }
            Rule::FreePower => {
                let k = free_factor_count(&node.expr).ok_or("not a product of free groups")?;
                let ok = if positive {
                    pair == CoherencePair::to_infinity(k)
                } else {
                    pair.n.finite().is_some_and(|n| n < k && pair == CoherencePair::step(n))
                };
                expect(ok, "pair does not match the number of free factors")
            }
            Rule::TopBettiVanishing => {
                let l = raag()?;
                let d = l.dimension();
                let ok = d >= 2
                    && positive
                    && pair == CoherencePair::to_infinity(d as u32)
                    && betti_rational(l).degrees[d as usize].betti == 0;
                expect(ok, "top rational homology does not vanish")
            }
            Rule::TnMembership => {
                let l = raag()?;
                let Some(TraceEvidence::TnCertificate { certificate }) = &step.evidence else {
                    return Err("missing certificate".into());
                };
                expect(
                    positive && pair == CoherencePair::to_infinity(certificate.n),
                    "pair mismatch",
                )?;
                verify_tn_certificate(certificate, l, ExtNat::Fin(certificate.n))
            }
            Rule::BbObstruction => {
                let l = raag()?;
                let Some(TraceEvidence::Obstruction { obstruction }) = &step.evidence else {
                    return Err("missing obstruction".into());
                };
                let n = obstruction.n;
                expect(!positive && pair == CoherencePair::step(n), "pair mismatch")?;
                let sub = l.full_subcomplex(obstruction.subset).map_err(|e| e.to_string())?;
                let budget = ScanLimits::default().pi1_budget;
                let lower = connectivity_status_with_budget(&sub, n as i32 - 1, budget).status;
                let upper = connectivity_status_with_budget(&sub, n as i32, budget).status;
                expect(lower == Tri::Yes && upper == Tri::No, "connectivity does not re-verify")
            }
            Rule::KarrassSolitar => {
                let Shape::Amalgam { left, right, edge } = node.shape else {
                    return Err("not an amalgam".into());
                };
                expect(positive && pair == CoherencePair::step(1), "pair mismatch")?;
                self.require_premise(step, 0, left, CoherencePair::step(1))?;
                self.require_premise(step, 1, right, CoherencePair::step(1))?;
                self.require_premise(step, 2, edge, CoherencePair::step(0))
            }
            Rule::GraphOfGroups => {
                let (vertices, edges) = match &node.shape {
                    Shape::Amalgam { left, right, edge } => (vec![*left, *right], vec![*edge]),
                    Shape::GraphOfGroups { vertices, edges } => (vertices.clone(), edges.clone()),
                    _ => return Err("not a graph of groups".into()),
                };
                let n = pair.n.finite().ok_or("infinite n")?;
                expect(positive && n >= 1, "needs n ≥ 1")?;
                expect(step.premises.len() == vertices.len() + edges.len(), "premise count")?;
                let edge_pair = CoherencePair::new(if n == 1 { 0 } else { 1 }, pair.m.pred()).ok_or("bad edge pair")?;
                for (k, &v) in vertices.iter().enumerate() {
                    self.require_premise(step, k, v, pair)?;
                }
                for (k, &e) in edges.iter().enumerate() {
                    self.require_premise(step, vertices.len() + k, e, edge_pair)?;
                }
                Ok(())
            }
            Rule::ExtensionFromQuotient => {
                let Shape::Extension { kernel, quotient } = node.shape else {
                    return Err("not an extension".into());
                };
                expect(positive, "positive only")?;
                self.require_premise(step, 0, quotient, pair)?;
                self.require_premise(step, 1, kernel, CoherencePair::new(0, pair.m).ok_or("bad pair")?)
            }
            Rule::ExtensionToQuotient => {
                let parent = node.parent.ok_or("no enclosing extension")?;
                let Shape::Extension { kernel, quotient } = self.nodes[parent].shape else {
                    return Err("parent is not an extension".into());
                };
                expect(positive && quotient == idx, "not the quotient")?;
                let fin = finiteness_of(&self.nodes[kernel].expr);
                expect(fin >= pair.m.pred(), "kernel finiteness too small")?;
                self.require_premise(step, 0, parent, pair)
            }
            Rule::Assumption => {
                let GroupExpr::Assumed { facts, .. } = &node.expr else {
                    return Err("not an assumption".into());
                };
                let list = if positive { &facts.positive } else { &facts.negative };
                expect(list.contains(&pair), "pair not assumed")
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    fn derive(e: &GroupExpr) -> Derivation {
        let d = derive_facts(e, &AnalysisBudget::default());
        d.verify().unwrap();
        d.check_consistency().unwrap();
        assert!(d.is_fixpoint());
        d
    }

    #[test]
    fn raag_of_square() {
        let d = derive(&GroupExpr::raag("c4", standard::cycle(4)));
        assert_eq!(d.positive, vec![CoherencePair::to_infinity(2)]);
        assert_eq!(d.negative, vec![CoherencePair::step(1)]);
    }

    #[test]
    fn free_squared_matches_square_raag() {
        let e = GroupExpr::DirectProduct(vec![GroupExpr::Free(2), GroupExpr::Free(2)]);
        let d = derive(&e);
        assert_eq!(d.positive, vec![CoherencePair::to_infinity(2)]);
        assert_eq!(d.negative, vec![CoherencePair::step(0), CoherencePair::step(1)]);
    }

    #[test]
    fn example_raag() {
        let d = derive(&GroupExpr::raag(
            "example",
            standard::double_suspension_of_triangle_and_point(),
        ));
        assert_eq!(d.positive, vec![CoherencePair::to_infinity(4)]);
        assert_eq!(d.negative, vec![CoherencePair::step(1), CoherencePair::step(2)]);
        assert!(!d.incomplete, "{:?}", d.notes);
        assert!(d.positive_trace(CoherencePair::to_infinity(3)).is_none());
        assert!(d.negative_trace(CoherencePair::step(3)).is_none());
    }

    #[test]
    fn simplex_is_polycyclic() {
        let d = derive(&GroupExpr::raag("simplex", standard::simplex(3)));
        assert_eq!(d.positive, vec![CoherencePair::to_infinity(0)]);
        assert_eq!(d.traces[0].rule, Rule::PolyCyclic);
    }

    #[test]
    fn product_of_chordal_raag_with_z() {
        let e = GroupExpr::DirectProduct(vec![
            GroupExpr::raag("path", standard::path(4)),
            GroupExpr::FreeAbelian(1),
        ]);
        let d = derive(&e);
        let t = d.positive_trace(CoherencePair::to_infinity(1)).unwrap();
        assert_eq!(t.rule, Rule::ExtensionFromQuotient);
        assert_eq!(d.traces[t.premises[0]].rule, Rule::ChordalRaag);
    }

    #[test]
    fn amalgam_over_edge() {
        let e = GroupExpr::AmalgamOverRaag {
            left: Box::new(GroupExpr::FreeAbelian(2)),
            right: Box::new(GroupExpr::FreeAbelian(2)),
            over: NamedComplex::new("pt", SimplicialComplex::points(&["a"])),
        };
        let d = derive(&e);
        assert_eq!(d.positive, vec![CoherencePair::to_infinity(1)]);
        assert!(d.positive_trace(CoherencePair::step(1)).is_some());
    }

    #[test]
    fn extension_to_quotient_fires() {
        let e = GroupExpr::Extension {
            kernel: Box::new(GroupExpr::FreeAbelian(1)),
            quotient: Box::new(GroupExpr::Assumed {
                label: "Q".into(),
                facts: Default::default(),
            }),
        };
        let d = derive(&e);
        assert!(d.positive.is_empty());
        // nothing about Q, so nothing about G
        let e2 = GroupExpr::Extension {
            kernel: Box::new(GroupExpr::FreeAbelian(1)),
            quotient: Box::new(GroupExpr::Free(3)),
        };
        let d2 = derive(&e2);
        assert_eq!(d2.positive, vec![CoherencePair::to_infinity(1)]);
    }

    #[test]
    fn contradiction_is_reported() {
        let e = GroupExpr::Assumed {
            label: "bad".into(),
            facts: super::super::expr::AssumedFacts {
                positive: vec![CoherencePair::to_infinity(2)],
                negative: vec![CoherencePair::step(3)],
                finiteness: None,
            },
        };
        let d = derive_facts(&e, &AnalysisBudget::default());
        let (path, c) = d.check_consistency().unwrap_err();
        assert_eq!(path, "G");
        assert_eq!(c.negative, CoherencePair::step(3));
    }
}
