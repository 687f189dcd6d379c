use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// A finite simple graph on labelled vertices, with bitset neighbourhoods.
///
/// Most algorithms come in a `*_within` form that restricts to the induced
/// subgraph on a vertex subset without reindexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<VertexSet>,
}

pub(crate) fn check_labels(labels: &[String]) -> Result<HashMap<&str, usize>> {
    if labels.len() > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            count: labels.len(),
            max: MAX_VERTICES,
        });
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(Error::InvalidInput(format!("duplicate vertex label `{l}`")));
        }
    }
    Ok(index)
}

impl Graph {
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("index {}", u.max(v))));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex `{}`", labels[u])));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { labels, adj })
    }

    pub fn from_labelled_edges<S: AsRef<str>>(labels: Vec<String>, edges: &[(S, S)]) -> Result<Self> {
        let index = check_labels(&labels)?;
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let idx = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(labels, &idx)
    }

    /// Graph on `0..n` labelled by decimal indices.
    pub fn with_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub(crate) fn from_parts(labels: Vec<String>, adj: Vec<VertexSet>) -> Self {
        Graph { labels, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.labels.len())
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adj[v]))
    }

    /// Induced subgraph on `s`, reindexed in ascending vertex order.
    pub fn induced(&self, s: VertexSet) -> Graph {
        let keep = s.to_vec();
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| self.adj[v].intersection(s).iter().map(|w| pos[w]).collect())
            .collect();
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        Graph { labels, adj }
    }

    /// Connected components of the induced subgraph on `within`, ordered by least vertex.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let comp = self.component_of(start, within);
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn component_of(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(self.adj[v]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices())
    }

    pub fn is_connected_within(&self, within: VertexSet) -> bool {
        match within.first() {
            None => true,
            Some(v) => self.component_of(v, within) == within,
        }
    }

    /// Vertices of `within` adjacent to every other vertex of `within`.
    pub fn dominating_within(&self, within: VertexSet) -> VertexSet {
        within
            .iter()
            .filter(|&v| within.without(v).is_subset(self.adj[v]))
            .collect()
    }

    /// Maximal cliques of the induced subgraph on `within`, sorted lexicographically.
    pub fn maximal_cliques_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        if !within.is_empty() {
            self.bron_kerbosch(VertexSet::EMPTY, within, VertexSet::EMPTY, within, &mut out);
        }
        out.sort();
        out
    }

    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        self.maximal_cliques_within(self.vertices())
    }

    fn bron_kerbosch(&self, r: VertexSet, p: VertexSet, x: VertexSet, within: VertexSet, out: &mut Vec<VertexSet>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        // Tomita pivot: maximise |P ∩ N(u)|.
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| (p.intersection(self.adj[u]).len(), std::cmp::Reverse(u)))
            .unwrap();
        let mut p = p;
        let mut x = x;
        for v in p.difference(self.adj[pivot]) {
            let nv = self.adj[v].intersection(within);
            self.bron_kerbosch(r.with(v), p.intersection(nv), x.intersection(nv), within, out);
            p.remove(v);
            x.insert(v);
        }
    }

    /// Size of a largest clique in the induced subgraph on `within`.
    pub fn clique_number_within(&self, within: VertexSet) -> usize {
        self.maximal_cliques_within(within)
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::with_indices(n, &edges).unwrap()
    }

    fn brute_maximal_cliques(g: &Graph) -> Vec<VertexSet> {
        let n = g.vertex_count();
        let cliques: Vec<VertexSet> = (1u128..1 << n)
            .map(VertexSet::from_bits)
            .filter(|&s| g.is_clique(s))
            .collect();
        let mut out: Vec<VertexSet> = cliques
            .iter()
            .copied()
            .filter(|&c| !cliques.iter().any(|&d| d != c && c.is_subset(d)))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::with_indices(2, &[(0, 0)]).is_err());
        assert!(Graph::with_indices(2, &[(0, 2)]).is_err());
        assert!(Graph::new(vec!["a".into(), "a".into()], &[]).is_err());
        let labels = (0..129).map(|i| i.to_string()).collect();
        assert!(matches!(
            Graph::new(labels, &[]),
            Err(Error::TooManyVertices { count: 129, .. })
        ));
    }

    #[test]
    fn components_and_domination() {
        let g = Graph::with_indices(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(comps[1].to_vec(), vec![3, 4]);
        assert_eq!(g.dominating_within(comps[0]).to_vec(), vec![1]);
        assert!(cycle(4).dominating_within(VertexSet::full(4)).is_empty());
    }

    #[test]
    fn octahedron_has_eight_triangles() {
        // join of three non-edges {0,1},{2,3},{4,5}
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::with_indices(6, &edges).unwrap();
        let cliques = g.maximal_cliques();
        assert_eq!(cliques.len(), 8);
        assert!(cliques.iter().all(|c| c.len() == 3));
        assert_eq!(cliques, brute_maximal_cliques(&g));
    }

    #[test]
    fn maximal_cliques_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=9);
            let p = rng.gen_range(0.1..0.9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::with_indices(n, &edges).unwrap();
            assert_eq!(g.maximal_cliques(), brute_maximal_cliques(&g));
        }
    }

    #[test]
    fn induced_reindexes() {
        let g = cycle(5);
        let h = g.induced([0, 1, 3].iter().collect());
        assert_eq!(h.labels(), &["0", "1", "3"]);
        assert_eq!(h.edges(), vec![(0, 1)]);
    }
}
