//! Chordality recognition with certificates, and minimal separators.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A vertex ordering in which the later neighbours of every vertex form a clique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectEliminationOrder(pub Vec<usize>);

/// A chordless cycle of length at least four, listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedCycleWitness(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "chordal", rename_all = "lowercase")]
pub enum Chordality {
    Yes { order: PerfectEliminationOrder },
    No { cycle: InducedCycleWitness },
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Yes { .. })
    }
}

impl PerfectEliminationOrder {
    /// Checks that the order is a permutation of `within` and that every vertex's
    /// later neighbours are pairwise adjacent.
    pub fn verify(&self, g: &Graph, within: VertexSet) -> bool {
        let set: VertexSet = self.0.iter().collect();
        if set != within || self.0.len() != within.len() {
            return false;
        }
        first_violation(g, &self.0, within).is_none()
    }
}

impl InducedCycleWitness {
    /// Distinct vertices of `within`, length ≥ 4, consecutive adjacent, others not.
    pub fn verify(&self, g: &Graph, within: VertexSet) -> bool {
        let c = &self.0;
        let k = c.len();
        let set: VertexSet = c.iter().collect();
        if k < 4 || set.len() != k || !set.is_subset(within) {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if g.adjacent(c[i], c[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }
}

/// Lexicographic breadth-first search on the induced subgraph on `within`.
/// Ties between equal labels go to the least vertex index. Returns the visit order.
pub fn lex_bfs(g: &Graph, within: VertexSet) -> Vec<usize> {
    let n = g.vertex_count();
    let total = within.len();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut unvisited = within;
    let mut order = Vec::with_capacity(total);
    for step in 0..total {
        let mut best: Option<usize> = None;
        for v in unvisited {
            match best {
                Some(b) if labels[v] <= labels[b] => {}
                _ => best = Some(v),
            }
        }
        let v = best.expect("unvisited vertices remain");
        unvisited.remove(v);
        order.push(v);
        for w in g.neighbours(v).intersection(unvisited) {
            labels[w].push(total - step);
        }
    }
    order
}

/// First vertex (in `order`) whose later neighbours are not a clique, with two
/// non-adjacent later neighbours.
fn first_violation(g: &Graph, order: &[usize], within: VertexSet) -> Option<(usize, usize, usize)> {
    let mut later = within;
    for &v in order {
        later.remove(v);
        let ln = g.neighbours(v).intersection(later);
        for a in ln {
            let missing = ln.without(a).difference(g.neighbours(a));
            if let Some(b) = missing.first() {
                return Some((v, a, b));
            }
        }
    }
    None
}

/// Shortest path from `a` to `b` using only vertices of `allowed`.
fn shortest_path(g: &Graph, a: usize, b: usize, allowed: VertexSet) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut seen = VertexSet::singleton(a);
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            let mut path = vec![b];
            let mut cur = b;
            while cur != a {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in g.neighbours(u).intersection(allowed).difference(seen) {
            seen.insert(w);
            parent[w] = u;
            queue.push_back(w);
        }
    }
    None
}

/// Induced cycle through `v`, `a`, `b` where `a`, `b` are non-adjacent neighbours of `v`.
fn cycle_through(g: &Graph, v: usize, a: usize, b: usize, within: VertexSet) -> Option<Vec<usize>> {
    let blocked = g.neighbours(v).without(a).without(b).with(v);
    let path = shortest_path(g, a, b, within.difference(blocked))?;
    let mut cycle = vec![v];
    cycle.extend(path);
    Some(cycle)
}

fn find_induced_cycle(g: &Graph, within: VertexSet, hint: (usize, usize, usize)) -> Vec<usize> {
    let (v, a, b) = hint;
    if let Some(c) = cycle_through(g, v, a, b, within) {
        return c;
    }
    // Every induced cycle C of length ≥ 4 is found from any v ∈ C and its two
    // C-neighbours, so this exhaustive fallback always succeeds on non-chordal input.
    for v in within {
        let nv = g.neighbours(v).intersection(within);
        for a in nv {
            for b in nv.difference(g.neighbours(a)).iter().filter(|&b| b > a) {
                if let Some(c) = cycle_through(g, v, a, b, within) {
                    return c;
                }
            }
        }
    }
    unreachable!("a non-chordal graph has an induced cycle")
}

/// Chordality of the induced subgraph on `within`, with a checkable certificate.
pub fn is_chordal_within(g: &Graph, within: VertexSet) -> Chordality {
    let mut order = lex_bfs(g, within);
    order.reverse();
    match first_violation(g, &order, within) {
        None => Chordality::Yes {
            order: PerfectEliminationOrder(order),
        },
        Some(hint) => Chordality::No {
            cycle: InducedCycleWitness(find_induced_cycle(g, within, hint)),
        },
    }
}

pub fn is_chordal(g: &Graph) -> Chordality {
    is_chordal_within(g, g.vertices())
}

/// Inclusion-minimal separating sets, possibly truncated by a budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorList {
    pub separators: Vec<VertexSet>,
    pub truncated: bool,
}

fn open_neighbourhood(g: &Graph, c: VertexSet) -> VertexSet {
    c.iter()
        .fold(VertexSet::EMPTY, |acc, v| acc.union(g.neighbours(v)))
        .difference(c)
}

/// All inclusion-minimal vertex sets `S` whose removal from the induced subgraph on
/// `within` increases the number of connected components, sorted lexicographically.
///
/// Candidates are generated as minimal `(a,b)`-separators by closing under the
/// `S ∪ N(x)` step, then filtered to those whose components are all full. At most
/// `budget` minimal separators are generated; beyond that the result is truncated.
pub fn minimal_separators_within(g: &Graph, within: VertexSet, budget: usize) -> SeparatorList {
    let budget = budget.max(1);
    let mut generated: BTreeSet<VertexSet> = BTreeSet::new();
    let mut truncated = false;

    'components: for comp in g.components_within(within) {
        if comp.len() < 3 {
            continue;
        }
        let mut queue: VecDeque<VertexSet> = VecDeque::new();
        let mut local: BTreeSet<VertexSet> = BTreeSet::new();
        let mut offer = |s: VertexSet, queue: &mut VecDeque<VertexSet>, generated: &mut BTreeSet<VertexSet>| -> bool {
            if s.is_empty() || !local.insert(s) {
                return true;
            }
            if generated.len() >= budget {
                return false;
            }
            generated.insert(s);
            queue.push_back(s);
            true
        };
        for v in comp {
            let closed = g.neighbours(v).with(v);
            for c in g.components_within(comp.difference(closed)) {
                let s = open_neighbourhood(g, c).intersection(comp);
                if !offer(s, &mut queue, &mut generated) {
                    truncated = true;
                    break 'components;
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            for x in s {
                let removed = s.union(g.neighbours(x));
                for c in g.components_within(comp.difference(removed)) {
                    let t = open_neighbourhood(g, c).intersection(comp);
                    if !offer(t, &mut queue, &mut generated) {
                        truncated = true;
                        break 'components;
                    }
                }
            }
        }
    }

    let separators = generated
        .into_iter()
        .filter(|&s| is_inclusion_minimal_separator(g, within, s))
        .collect();
    SeparatorList { separators, truncated }
}

pub fn minimal_separators(g: &Graph, budget: usize) -> SeparatorList {
    minimal_separators_within(g, g.vertices(), budget)
}

/// `S` splits its component into at least two pieces, each adjacent to all of `S`.
fn is_inclusion_minimal_separator(g: &Graph, within: VertexSet, s: VertexSet) -> bool {
    let Some(first) = s.first() else {
        return false;
    };
    let comp = g.component_of(first, within);
    if !s.is_subset(comp) {
        return false;
    }
    let pieces = g.components_within(comp.difference(s));
    pieces.len() >= 2
        && pieces
            .iter()
            .all(|&c| open_neighbourhood(g, c).intersection(within) == s)
}
