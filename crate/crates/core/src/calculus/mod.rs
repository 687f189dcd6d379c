//! Deduction of `(n,m)`-coherence facts for groups built from right-angled Artin
//! groups, free and free abelian groups, products, amalgams, graphs of groups and
//! extensions.

mod engine;
mod expr;
mod pair;
mod parse;

pub use engine::{
    check_consistency, derive_facts, finiteness_of, AnalysisBudget, Contradiction, Derivation, Fact, FactSet,
    GroupNode, Polarity, RaagAnalysis, Rule, Shape, TraceEvidence, TraceStep,
};
pub use expr::{AssumedFacts, GroupExpr, NamedComplex};
pub use pair::{find_contradiction, maximal_pairs, minimal_negatives, pair_grid, CoherencePair};
pub use parse::{is_full_by_labels, load_expr, parse_expr, parse_expr_with};
