use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{check_labels, Graph};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// A finite abstract simplicial complex stored by its facets (maximal simplices).
///
/// Vertex order is the input order; facets are kept sorted lexicographically by their
/// index lists. Every vertex lies in at least one facet, so isolated vertices appear as
/// 0-dimensional facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    facets: Vec<VertexSet>,
    flag: bool,
}

/// Calls `f` on every `k`-element subset of `set`, in lexicographic order.
pub(crate) fn for_each_subset_of_size(set: VertexSet, k: usize, f: &mut impl FnMut(VertexSet)) {
    fn go(items: &[usize], k: usize, acc: VertexSet, f: &mut impl FnMut(VertexSet)) {
        if k == 0 {
            f(acc);
            return;
        }
        if items.len() < k {
            return;
        }
        for i in 0..=items.len() - k {
            go(&items[i + 1..], k - 1, acc.with(items[i]), f);
        }
    }
    let items = set.to_vec();
    go(&items, k, VertexSet::EMPTY, f);
}

fn maximal_only(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.retain(|s| !s.is_empty());
    // larger sets first so that containment only has to look backwards
    sets.sort_by_key(|s| std::cmp::Reverse(s.len()));
    sets.dedup();
    let mut kept: Vec<VertexSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(*k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            labels: Vec::new(),
            facets: Vec::new(),
            flag: true,
        }
    }

    /// The clique (flag) complex of `g`: simplices are exactly the cliques of `g`.
    pub fn from_graph(g: &Graph) -> Self {
        SimplicialComplex {
            labels: g.labels().to_vec(),
            facets: g.maximal_cliques(),
            flag: true,
        }
    }

    /// Builds a complex from facet index lists. Non-maximal facets are dropped and
    /// vertices not covered by any facet become 0-simplices. Flagness is detected.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut sets = Vec::with_capacity(facets.len() + n);
        for f in facets {
            let mut s = VertexSet::EMPTY;
            for &v in f {
                if v >= n {
                    return Err(Error::UnknownVertex(format!("index {v}")));
                }
                if s.contains(v) {
                    return Err(Error::InvalidInput(format!(
                        "facet {f:?} repeats vertex `{}`",
                        labels[v]
                    )));
                }
                s.insert(v);
            }
            sets.push(s);
        }
        let covered = sets.iter().fold(VertexSet::EMPTY, |a, &s| a.union(s));
        sets.extend(VertexSet::full(n).difference(covered).iter().map(VertexSet::singleton));
        let mut complex = SimplicialComplex {
            labels,
            facets: maximal_only(sets),
            flag: false,
        };
        complex.flag = complex.missing_clique().is_none();
        Ok(complex)
    }

    pub fn from_labelled_facets<S: AsRef<str>>(labels: Vec<String>, facets: &[Vec<S>]) -> Result<Self> {
        let index = check_labels(&labels)?;
        let idx = facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(|l| {
                        index
                            .get(l.as_ref())
                            .copied()
                            .ok_or_else(|| Error::UnknownVertex(l.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::from_facets(labels, &idx)
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

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn is_flag(&self) -> bool {
        self.flag
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Maximum facet size minus one; `-1` for the empty complex.
    pub fn dimension(&self) -> i32 {
        self.facets.iter().map(|f| f.len() as i32).max().unwrap_or(0) - 1
    }

    /// True when the complex is a single simplex (including a single vertex).
    /// The empty complex is not counted as a simplex.
    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    pub fn contains_simplex(&self, s: VertexSet) -> bool {
        s.is_subset(self.vertices()) && self.facets.iter().any(|f| s.is_subset(*f))
    }

    pub fn one_skeleton(&self) -> Graph {
        let n = self.vertex_count();
        let mut adj = vec![VertexSet::EMPTY; n];
        for &f in &self.facets {
            for v in f {
                adj[v] = adj[v].union(f.without(v));
            }
        }
        Graph::from_parts(self.labels.clone(), adj)
    }

    /// A clique of the 1-skeleton contained in no facet, if the complex is not flag.
    fn missing_clique(&self) -> Option<VertexSet> {
        self.one_skeleton()
            .maximal_cliques()
            .into_iter()
            .find(|c| !self.facets.iter().any(|f| c.is_subset(*f)))
    }

    /// Errors with a witness clique when the complex is not flag.
    pub fn require_flag(&self) -> Result<()> {
        if self.flag {
            return Ok(());
        }
        let clique = self.missing_clique().unwrap_or_default();
        Err(Error::NotFlag(clique.iter().map(|v| self.labels[v].clone()).collect()))
    }

    /// All `k`-simplices in canonical (lexicographic) order.
    pub fn simplices(&self, k: usize) -> Vec<VertexSet> {
        let mut seen = HashSet::new();
        for &f in &self.facets {
            if f.len() > k {
                for_each_subset_of_size(f, k + 1, &mut |s| {
                    seen.insert(s);
                });
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Simplex counts `f_0, .., f_dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dimension())
            .map(|k| self.simplices(k as usize).len())
            .collect()
    }

    /// Vertices contained in every facet; nonempty exactly when the complex is a cone.
    pub fn apexes(&self) -> VertexSet {
        match self.facets.split_first() {
            None => VertexSet::EMPTY,
            Some((first, rest)) => rest.iter().fold(*first, |a, &f| a.intersection(f)),
        }
    }

    /// Full subcomplex on `s`, reindexed in ascending vertex order.
    pub fn full_subcomplex(&self, s: VertexSet) -> Result<Self> {
        if !s.is_subset(self.vertices()) {
            let bad = s.difference(self.vertices()).first().unwrap_or(0);
            return Err(Error::UnknownVertex(format!("index {bad}")));
        }
        let keep = s.to_vec();
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let restricted = self
            .facets
            .iter()
            .map(|f| f.intersection(s).iter().map(|v| pos[v]).collect())
            .collect();
        let mut sub = SimplicialComplex {
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            facets: maximal_only(restricted),
            flag: self.flag,
        };
        if !sub.flag {
            sub.flag = sub.missing_clique().is_none();
        }
        Ok(sub)
    }

    /// Full subcomplex on the given labels.
    pub fn full_subcomplex_by_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let mut s = VertexSet::EMPTY;
        for l in labels {
            let v = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownVertex(l.as_ref().to_string()))?;
            s.insert(v);
        }
        self.full_subcomplex(s)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn concat_labels(&self, other: &Self) -> Result<Vec<String>> {
        let total = self.vertex_count() + other.vertex_count();
        if total > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                count: total,
                max: MAX_VERTICES,
            });
        }
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(Error::LabelCollision(l.clone()));
        }
        Ok(self.labels.iter().chain(&other.labels).cloned().collect())
    }

    fn shifted_facets(&self, offset: usize) -> Vec<VertexSet> {
        self.facets
            .iter()
            .map(|f| VertexSet::from_bits(f.bits() << offset))
            .collect()
    }

    /// Join: simplices are unions `σ ∪ τ`. Vertices of `self` come first.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let labels = self.concat_labels(other)?;
        let right = other.shifted_facets(self.vertex_count());
        let facets = if self.facets.is_empty() {
            right
        } else if right.is_empty() {
            self.facets.clone()
        } else {
            let mut out = Vec::with_capacity(self.facets.len() * right.len());
            for &a in &self.facets {
                for &b in &right {
                    out.push(a.union(b));
                }
            }
            out.sort();
            out
        };
        Ok(SimplicialComplex {
            labels,
            facets,
            flag: self.flag && other.flag,
        })
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let labels = self.concat_labels(other)?;
        let mut facets = self.facets.clone();
        facets.extend(other.shifted_facets(self.vertex_count()));
        facets.sort();
        Ok(SimplicialComplex {
            labels,
            facets,
            flag: self.flag && other.flag,
        })
    }

    /// `join(self, Δ⁰)` with the given apex label.
    pub fn cone(&self, apex: &str) -> Result<Self> {
        self.join(&SimplicialComplex::points(&[apex]))
    }

    /// `join(self, S⁰)` with the given pair of suspension labels.
    pub fn suspend(&self, north: &str, south: &str) -> Result<Self> {
        self.join(&SimplicialComplex::points(&[north, south]))
    }

    /// Discrete complex on the given labels.
    pub fn points(labels: &[&str]) -> Self {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let facets = (0..labels.len()).map(VertexSet::singleton).collect();
        SimplicialComplex {
            labels,
            facets,
            flag: true,
        }
    }

    /// Vertices adjacent in the 1-skeleton to every other vertex.
    pub fn dominating_vertices(&self) -> Vec<usize> {
        self.one_skeleton().dominating_within(self.vertices()).to_vec()
    }

    /// Vertex sets of the connected components, ordered by least vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.one_skeleton().components()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Facets as sorted index lists.
    pub fn facet_lists(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(|f| f.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn triangle_graph_is_a_two_simplex() {
        let g = Graph::with_indices(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let l = SimplicialComplex::from_graph(&g);
        assert!(l.is_simplex());
        assert_eq!(l.dimension(), 2);
    }

    #[test]
    fn square_has_no_triangles() {
        let l = standard::cycle(4);
        assert_eq!(l.f_vector(), vec![4, 4]);
        assert_eq!(l.dimension(), 1);
    }

    #[test]
    fn octahedron_from_graph() {
        let l = standard::octahedron();
        assert_eq!(l.facets().len(), 8);
        assert_eq!(l.f_vector(), vec![6, 12, 8]);
        assert!(l.is_flag());
    }

    #[test]
    fn facet_normalisation() {
        let labels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let l = SimplicialComplex::from_facets(labels, &[vec![0, 1], vec![0, 1, 2], vec![1]]).unwrap();
        assert_eq!(l.facet_lists(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn hollow_triangle_is_not_flag() {
        let labels = vec!["a".into(), "b".into(), "c".into()];
        let l = SimplicialComplex::from_facets(labels, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!l.is_flag());
        assert!(matches!(l.require_flag(), Err(Error::NotFlag(_))));
    }

    #[test]
    fn full_subcomplex_of_triangle() {
        let l = standard::simplex(2);
        let e = l.full_subcomplex([0, 2].iter().collect()).unwrap();
        assert_eq!(e.facet_lists(), vec![vec![0, 1]]);
        assert_eq!(e.labels(), &["v0", "v2"]);
        assert!(l.full_subcomplex(VertexSet::singleton(5)).is_err());
    }

    #[test]
    fn example_contains_square() {
        let l = standard::double_suspension_of_triangle_and_point();
        let sq = l.full_subcomplex_by_labels(&["n1", "s1", "n2", "s2"]).unwrap();
        assert_eq!(sq.f_vector(), vec![4, 4]);
        assert!(sq
            .one_skeleton()
            .vertices()
            .iter()
            .all(|v| sq.one_skeleton().neighbours(v).len() == 2));
    }

    #[test]
    fn join_identities() {
        let l = standard::cycle(5);
        assert_eq!(l.join(&SimplicialComplex::empty()).unwrap(), l);
        let s0 = SimplicialComplex::points(&["a", "b"]);
        let t0 = SimplicialComplex::points(&["c", "d"]);
        let sq = s0.join(&t0).unwrap();
        assert_eq!(sq.f_vector(), vec![4, 4]);
        assert_eq!(sq.dimension(), 1);
        assert!(matches!(s0.join(&s0), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn example_dimensions() {
        let l = standard::double_suspension_of_triangle_and_point();
        assert_eq!(l.vertex_count(), 8);
        assert_eq!(l.dimension(), 4);
        assert!(l.is_flag());
    }

    #[test]
    fn dominating_vertices_cases() {
        assert_eq!(standard::simplex(2).dominating_vertices(), vec![0, 1, 2]);
        assert!(standard::cycle(4).dominating_vertices().is_empty());
        let cone = standard::cycle(4).cone("apex").unwrap();
        assert_eq!(cone.dominating_vertices(), vec![4]);
        // the apex splits off as a join factor
        let base = cone.full_subcomplex(VertexSet::full(4)).unwrap();
        assert_eq!(base.cone("apex").unwrap(), cone);
    }

    #[test]
    fn component_cases() {
        let tri = standard::simplex(2);
        let l = tri.disjoint_union(&SimplicialComplex::points(&["w"])).unwrap();
        let comps = l.connected_components();
        assert_eq!(comps.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![3, 1]);
        assert_eq!(standard::cycle(6).connected_components().len(), 1);
        assert!(SimplicialComplex::empty().connected_components().is_empty());
    }
}
