//! Certified membership in the classes `𝒯ₙ` (n ≥ 2) of flag complexes.
//!
//! `𝒯ₙ` is the smallest class containing all simplices, all flag complexes of
//! dimension ≤ n−1, all n-dimensional flag complexes with `Hₙ(L;ℚ) = 0`, and closed
//! under cones and under gluing along a common full subcomplex with chordal
//! 1-skeleton (or along the empty set). The search below is sound: every certificate
//! it returns is re-checkable by [`verify_tn_certificate`]. Failure to find one is not
//! a proof of non-membership.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::chordal::{is_chordal_within, minimal_separators_within};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::graph::Graph;
use crate::homology::betti_rational;
use crate::t1::{check_gluing, t1_certify_within, verify_t1_certificate, T1Node, T1Outcome};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Largest vertex set on which exhaustive separator enumeration runs unbounded.
const EXHAUSTIVE_SUBSET_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_separators: usize,
    pub exhaustive_separators: bool,
    pub memoise: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: MAX_VERTICES + 1,
            max_separators: 256,
            exhaustive_separators: false,
            memoise: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TnNode {
    Simplex {
        vertices: VertexSet,
    },
    LowDim {
        vertices: VertexSet,
        dimension: i32,
    },
    TopBettiZero {
        vertices: VertexSet,
        dimension: i32,
    },
    Cone {
        vertices: VertexSet,
        apex: usize,
        base: Box<TnNode>,
    },
    Gluing {
        vertices: VertexSet,
        separator: VertexSet,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        separator_certificate: Option<T1Node>,
        left: Box<TnNode>,
        right: Box<TnNode>,
    },
}

impl TnNode {
    pub fn vertices(&self) -> VertexSet {
        match self {
            TnNode::Simplex { vertices }
            | TnNode::LowDim { vertices, .. }
            | TnNode::TopBettiZero { vertices, .. }
            | TnNode::Cone { vertices, .. }
            | TnNode::Gluing { vertices, .. } => *vertices,
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            TnNode::Simplex { .. } => "simplex",
            TnNode::LowDim { .. } => "low_dim",
            TnNode::TopBettiZero { .. } => "top_betti_zero",
            TnNode::Cone { .. } => "cone",
            TnNode::Gluing { .. } => "gluing",
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TnNode::Cone { base, .. } => 1 + base.node_count(),
            TnNode::Gluing { left, right, .. } => 1 + left.node_count() + right.node_count(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TnNode::Cone { base, .. } => 1 + base.depth(),
            TnNode::Gluing { left, right, .. } => 1 + left.depth().max(right.depth()),
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TnCertificate {
    pub n: u32,
    pub root: TnNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TnOutcome {
    Certified {
        certificate: TnCertificate,
    },
    /// Every candidate under the chosen strategy was explored without success.
    Exhausted,
    /// Some branch was cut by the depth or separator limits.
    BudgetExceeded,
}

impl TnOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, TnOutcome::Certified { .. })
    }

    pub fn certificate(&self) -> Option<&TnCertificate> {
        match self {
            TnOutcome::Certified { certificate } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub memo_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TnSearch {
    pub n: u32,
    #[serde(flatten)]
    pub outcome: TnOutcome,
    pub stats: SearchStats,
}

#[derive(Clone)]
struct Solved {
    node: Option<TnNode>,
    truncated: bool,
    /// Deepest level touched while exploring, counting this node as 1.
    height: usize,
    /// Whether the depth limit cut the exploration somewhere.
    hit_depth_limit: bool,
}

struct MemoEntry {
    solved: Solved,
    remaining: usize,
}

struct Searcher<'a> {
    g: &'a Graph,
    n: u32,
    budget: SearchBudget,
    memo: HashMap<VertexSet, MemoEntry>,
    stats: SearchStats,
}

impl Searcher<'_> {
    fn solve(&mut self, u: VertexSet, remaining: usize) -> Solved {
        if remaining == 0 {
            return Solved {
                node: None,
                truncated: true,
                height: 1,
                hit_depth_limit: true,
            };
        }
        if self.budget.memoise {
            if let Some(e) = self.memo.get(&u) {
                let s = &e.solved;
                // A result is reproducible at any depth allowance it did not run into.
                let reusable = if s.hit_depth_limit {
                    remaining == e.remaining
                } else {
                    remaining >= s.height
                };
                if reusable {
                    self.stats.memo_hits += 1;
                    return s.clone();
                }
            }
        }
        let solved = self.solve_uncached(u, remaining);
        if self.budget.memoise {
            self.memo.insert(
                u,
                MemoEntry {
                    solved: solved.clone(),
                    remaining,
                },
            );
        }
        solved
    }

    fn solve_uncached(&mut self, u: VertexSet, remaining: usize) -> Solved {
        self.stats.nodes += 1;
        let leaf = |node| Solved {
            node: Some(node),
            truncated: false,
            height: 1,
            hit_depth_limit: false,
        };
        if self.g.is_clique(u) {
            return leaf(TnNode::Simplex { vertices: u });
        }
        let dimension = self.g.clique_number_within(u) as i32 - 1;
        let n = self.n as i32;
        if dimension < n {
            return leaf(TnNode::LowDim { vertices: u, dimension });
        }
        if dimension == n && top_betti(self.g, u, self.n as usize) == 0 {
            return leaf(TnNode::TopBettiZero { vertices: u, dimension });
        }

        let mut acc = Solved {
            node: None,
            truncated: false,
            height: 1,
            hit_depth_limit: false,
        };
        let absorb = |acc: &mut Solved, child: &Solved| {
            acc.truncated |= child.truncated;
            acc.hit_depth_limit |= child.hit_depth_limit;
            acc.height = acc.height.max(child.height + 1);
        };

        if let Some(apex) = self.g.dominating_within(u).first() {
            let base = self.solve(u.without(apex), remaining - 1);
            absorb(&mut acc, &base);
            if let Some(base) = base.node {
                acc.node = Some(TnNode::Cone {
                    vertices: u,
                    apex,
                    base: Box::new(base),
                });
                return acc;
            }
        }

        let (candidates, truncated) = self.separator_candidates(u);
        acc.truncated |= truncated;
        for separator in candidates {
            let pieces = self.g.components_within(u.difference(separator));
            let left_set = separator.union(pieces[0]);
            let right_set = u.difference(pieces[0]);
            let left = self.solve(left_set, remaining - 1);
            absorb(&mut acc, &left);
            let Some(left) = left.node else { continue };
            let right = self.solve(right_set, remaining - 1);
            absorb(&mut acc, &right);
            let Some(right) = right.node else { continue };
            let separator_certificate = if separator.is_empty() {
                None
            } else {
                match t1_certify_within(self.g, separator) {
                    T1Outcome::Certified { certificate } => Some(certificate),
                    T1Outcome::Refuted { .. } => unreachable!("candidates are chordal"),
                }
            };
            acc.node = Some(TnNode::Gluing {
                vertices: u,
                separator,
                separator_certificate,
                left: Box::new(left),
                right: Box::new(right),
            });
            return acc;
        }
        acc
    }

    /// Separators to try at `u`, in exploration order, and whether the list was cut.
    fn separator_candidates(&self, u: VertexSet) -> (Vec<VertexSet>, bool) {
        let cap = self.budget.max_separators;
        let g = self.g;
        let splits = |s: VertexSet| g.components_within(u.difference(s)).len() >= 2;
        let chordal = |s: VertexSet| is_chordal_within(g, s).is_chordal();
        let mut out = Vec::new();
        let mut truncated = false;
        if self.budget.exhaustive_separators {
            let mut examined = 0u64;
            // preorder over index lists yields lexicographic order
            let items = u.to_vec();
            let mut stack: Vec<(VertexSet, usize)> = vec![(VertexSet::EMPTY, 0)];
            while let Some((s, next)) = stack.pop() {
                examined += 1;
                if examined > EXHAUSTIVE_SUBSET_LIMIT {
                    truncated = true;
                    break;
                }
                if s != u && splits(s) && chordal(s) {
                    if out.len() == cap {
                        truncated = true;
                        break;
                    }
                    out.push(s);
                }
                for i in (next..items.len()).rev() {
                    stack.push((s.with(items[i]), i + 1));
                }
            }
        } else {
            if !g.is_connected_within(u) {
                out.push(VertexSet::EMPTY);
            }
            let list = minimal_separators_within(g, u, cap.saturating_mul(16).max(64));
            truncated |= list.truncated;
            for s in list.separators.into_iter().filter(|&s| chordal(s)) {
                if out.len() == cap {
                    truncated = true;
                    break;
                }
                out.push(s);
            }
        }
        (out, truncated)
    }
}

/// Rational Betti number in degree `k` of the full subcomplex on `u`.
fn top_betti(g: &Graph, u: VertexSet, k: usize) -> usize {
    let sub = SimplicialComplex::from_graph(&g.induced(u));
    betti_rational(&sub).degrees.get(k).map_or(0, |d| d.betti)
}

fn finite_order(n: ExtNat) -> Result<u32> {
    match n {
        ExtNat::Fin(v) if v >= 2 => Ok(v),
        ExtNat::Fin(v) => Err(Error::Precondition(format!(
            "n = {v}: the certifier handles n ≥ 2 (use the chordality certificate for n = 1)"
        ))),
        ExtNat::Inf => Err(Error::Precondition("n must be finite".into())),
    }
}

/// Searches for a certificate that `complex ∈ 𝒯ₙ`.
pub fn certify_tn(complex: &SimplicialComplex, n: ExtNat, budget: SearchBudget) -> Result<TnSearch> {
    complex.require_flag()?;
    let n = finite_order(n)?;
    let g = complex.one_skeleton();
    Ok(certify_tn_graph(&g, n, budget))
}

/// Same as [`certify_tn`] for the clique complex of `g`.
pub fn certify_tn_graph(g: &Graph, n: u32, budget: SearchBudget) -> TnSearch {
    let mut searcher = Searcher {
        g,
        n,
        budget,
        memo: HashMap::new(),
        stats: SearchStats::default(),
    };
    let all = g.vertices();
    let outcome = if all.is_empty() {
        TnOutcome::Certified {
            certificate: TnCertificate {
                n,
                root: TnNode::LowDim {
                    vertices: all,
                    dimension: -1,
                },
            },
        }
    } else {
        let solved = searcher.solve(all, budget.max_depth);
        match solved.node {
            Some(root) => TnOutcome::Certified {
                certificate: TnCertificate { n, root },
            },
            None if solved.truncated => TnOutcome::BudgetExceeded,
            None => TnOutcome::Exhausted,
        }
    };
    TnSearch {
        n,
        outcome,
        stats: searcher.stats,
    }
}

/// Turns a clique-separator tree into a `𝒯ₙ` certificate (simplex leaves, simplex or
/// empty separators).
pub fn lift_t1_certificate(t1: &T1Node, n: u32) -> TnCertificate {
    fn lift(node: &T1Node) -> TnNode {
        match node {
            T1Node::Simplex { vertices } => TnNode::Simplex { vertices: *vertices },
            T1Node::Gluing {
                vertices,
                separator,
                left,
                right,
            } => TnNode::Gluing {
                vertices: *vertices,
                separator: *separator,
                separator_certificate: (!separator.is_empty()).then_some(T1Node::Simplex { vertices: *separator }),
                left: Box::new(lift(left)),
                right: Box::new(lift(right)),
            },
        }
    }
    TnCertificate { n, root: lift(t1) }
}

/// Re-checks every rule application of a certificate against `complex`.
pub fn verify_tn_certificate(
    cert: &TnCertificate,
    complex: &SimplicialComplex,
    n: ExtNat,
) -> std::result::Result<(), String> {
    if !complex.is_flag() {
        return Err("complex is not flag".into());
    }
    let n = finite_order(n).map_err(|e| e.to_string())?;
    if cert.n != n {
        return Err(format!("certificate is for n = {}, expected {n}", cert.n));
    }
    let g = complex.one_skeleton();
    if cert.root.vertices() != g.vertices() {
        return Err("certificate root does not cover the complex".into());
    }
    check_tn_node(&cert.root, &g, n)
}

pub fn is_valid_tn_certificate(cert: &TnCertificate, complex: &SimplicialComplex, n: ExtNat) -> bool {
    verify_tn_certificate(cert, complex, n).is_ok()
}

fn check_tn_node(node: &TnNode, g: &Graph, n: u32) -> std::result::Result<(), String> {
    let u = node.vertices();
    if !u.is_subset(g.vertices()) {
        return Err(format!("{u:?} is not a vertex subset"));
    }
    let recomputed_dim = || g.clique_number_within(u) as i32 - 1;
    match node {
        TnNode::Simplex { .. } => {
            if u.is_empty() || !g.is_clique(u) {
                return Err(format!("{u:?} is not a simplex"));
            }
        }
        TnNode::LowDim { dimension, .. } => {
            let d = recomputed_dim();
            if d != *dimension {
                return Err(format!("{u:?} has dimension {d}, certificate says {dimension}"));
            }
            if d > n as i32 - 1 {
                return Err(format!("{u:?} has dimension {d} > {}", n - 1));
            }
        }
        TnNode::TopBettiZero { dimension, .. } => {
            let d = recomputed_dim();
            if d != *dimension || d != n as i32 {
                return Err(format!("{u:?} has dimension {d}, expected {n}"));
            }
            let b = top_betti(g, u, n as usize);
            if b != 0 {
                return Err(format!("{u:?} has top Betti number {b}"));
            }
        }
        TnNode::Cone { apex, base, .. } => {
            if !u.contains(*apex) {
                return Err(format!("apex {apex} not in {u:?}"));
            }
            if !u.without(*apex).is_subset(g.neighbours(*apex)) {
                return Err(format!("{apex} is not a cone point of {u:?}"));
            }
            if base.vertices() != u.without(*apex) {
                return Err(format!("cone base over {u:?} is not the link of {apex}"));
            }
            check_tn_node(base, g, n)?;
        }
        TnNode::Gluing {
            separator,
            separator_certificate,
            left,
            right,
            ..
        } => {
            check_gluing(g, u, *separator, left.vertices(), right.vertices())?;
            match (separator.is_empty(), separator_certificate) {
                (true, None) => {}
                (true, Some(_)) => return Err("empty separator carries a certificate".into()),
                (false, None) => return Err(format!("separator {separator:?} lacks a chordality certificate")),
                (false, Some(c)) => {
                    verify_t1_certificate(c, g, *separator)?;
                    if !is_chordal_within(g, *separator).is_chordal() {
                        return Err(format!("separator {separator:?} is not chordal"));
                    }
                }
            }
            check_tn_node(left, g, n)?;
            check_tn_node(right, g, n)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    fn search(l: &SimplicialComplex, n: u32, exhaustive: bool) -> TnSearch {
        let budget = SearchBudget {
            exhaustive_separators: exhaustive,
            ..SearchBudget::default()
        };
        certify_tn(l, ExtNat::Fin(n), budget).unwrap()
    }

    #[test]
    fn example_in_t4_by_top_betti() {
        let l = standard::double_suspension_of_triangle_and_point();
        let s = search(&l, 4, false);
        let cert = s.outcome.certificate().expect("certified");
        assert_eq!(cert.root.rule_name(), "top_betti_zero");
        verify_tn_certificate(cert, &l, ExtNat::Fin(4)).unwrap();
    }

    #[test]
    fn example_not_found_in_t3() {
        let l = standard::double_suspension_of_triangle_and_point();
        assert_eq!(search(&l, 3, true).outcome, TnOutcome::Exhausted);
        assert_eq!(search(&l, 3, false).outcome, TnOutcome::Exhausted);
    }

    #[test]
    fn low_dimension_leaf() {
        let l = standard::cycle(6);
        let s = search(&l, 2, false);
        assert!(matches!(
            s.outcome.certificate().unwrap().root,
            TnNode::LowDim { dimension: 1, .. }
        ));
    }

    #[test]
    fn octahedron_fails_n2_and_passes_n3() {
        let l = standard::octahedron();
        assert!(!search(&l, 2, true).outcome.is_certified());
        assert!(search(&l, 3, false).outcome.is_certified());
    }

    #[test]
    fn cone_over_suspended_path_uses_cone_rule() {
        let l = standard::path(3).suspend("a", "b").unwrap().cone("x").unwrap();
        let s = search(&l, 2, false);
        let cert = s.outcome.certificate().expect("certified");
        assert_eq!(cert.root.rule_name(), "cone");
        verify_tn_certificate(cert, &l, ExtNat::Fin(2)).unwrap();
    }

    #[test]
    fn cone_over_octahedron_not_found_in_t2() {
        let l = standard::octahedron().cone("x").unwrap();
        assert_eq!(search(&l, 2, false).outcome, TnOutcome::Exhausted);
    }

    fn tetrahedron_chain() -> SimplicialComplex {
        let f = [vec![0, 1, 2, 3], vec![3, 4, 5, 6], vec![6, 7, 8, 9]];
        let labels = (0..10).map(|i| format!("v{i}")).collect();
        SimplicialComplex::from_facets(labels, &f).unwrap()
    }

    #[test]
    fn rejects_bad_orders() {
        let l = standard::cycle(4);
        assert!(certify_tn(&l, ExtNat::Fin(1), SearchBudget::default()).is_err());
        assert!(certify_tn(&l, ExtNat::Inf, SearchBudget::default()).is_err());
    }

    #[test]
    fn depth_limit_reports_budget() {
        let l = standard::path(3).suspend("a", "b").unwrap().cone("x").unwrap();
        let budget = SearchBudget {
            max_depth: 1,
            ..SearchBudget::default()
        };
        let s = certify_tn(&l, ExtNat::Fin(2), budget).unwrap();
        assert_eq!(s.outcome, TnOutcome::BudgetExceeded);
    }

    #[test]
    fn corrupted_separator_fails_verification() {
        let l = tetrahedron_chain();
        let s = search(&l, 2, false);
        let mut cert = s.outcome.certificate().unwrap().clone();
        assert!(is_valid_tn_certificate(&cert, &l, ExtNat::Fin(2)));
        fn corrupt(node: &mut TnNode) -> bool {
            match node {
                TnNode::Gluing { separator, .. } => {
                    *separator = VertexSet::EMPTY;
                    true
                }
                TnNode::Cone { base, .. } => corrupt(base),
                _ => false,
            }
        }
        assert!(corrupt(&mut cert.root));
        assert!(!is_valid_tn_certificate(&cert, &l, ExtNat::Fin(2)));
    }
}
