//! Certified membership in the class of "trees of simplices": flag complexes built
//! from simplices by gluing along a common simplex or the empty set.
//!
//! A flag complex belongs to this class exactly when its 1-skeleton is chordal.

use serde::{Deserialize, Serialize};

use crate::chordal::{is_chordal_within, minimal_separators_within, Chordality, InducedCycleWitness};
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Derivation tree. Vertex sets refer to the ambient complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum T1Node {
    Simplex {
        vertices: VertexSet,
    },
    Gluing {
        vertices: VertexSet,
        separator: VertexSet,
        left: Box<T1Node>,
        right: Box<T1Node>,
    },
}

pub type T1Certificate = T1Node;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum T1Outcome {
    Certified { certificate: T1Certificate },
    Refuted { cycle: InducedCycleWitness },
}

impl T1Outcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, T1Outcome::Certified { .. })
    }
}

impl T1Node {
    pub fn vertices(&self) -> VertexSet {
        match self {
            T1Node::Simplex { vertices } | T1Node::Gluing { vertices, .. } => *vertices,
        }
    }

    pub fn leaves(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<VertexSet>) {
        match self {
            T1Node::Simplex { vertices } => out.push(*vertices),
            T1Node::Gluing { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            T1Node::Simplex { .. } => 1,
            T1Node::Gluing { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }
}

/// Splits a flag complex with chordal 1-skeleton into simplices.
pub fn t1_certify(complex: &SimplicialComplex) -> Result<T1Outcome> {
    complex.require_flag()?;
    let g = complex.one_skeleton();
    Ok(t1_certify_within(&g, g.vertices()))
}

/// Same as [`t1_certify`] for the full subcomplex on `within` of the clique complex of `g`.
pub fn t1_certify_within(g: &Graph, within: VertexSet) -> T1Outcome {
    match is_chordal_within(g, within) {
        Chordality::No { cycle } => T1Outcome::Refuted { cycle },
        Chordality::Yes { .. } => T1Outcome::Certified {
            certificate: decompose(g, within),
        },
    }
}

/// Recursive clique-separator decomposition of a chordal induced subgraph.
fn decompose(g: &Graph, within: VertexSet) -> T1Node {
    if g.is_clique(within) {
        return T1Node::Simplex { vertices: within };
    }
    let components = g.components_within(within);
    let separator = if components.len() > 1 {
        VertexSet::EMPTY
    } else {
        // chordal graphs have fewer minimal separators than vertices, and all are cliques
        minimal_separators_within(g, within, usize::MAX)
            .separators
            .into_iter()
            .find(|&s| g.is_clique(s))
            .expect("non-complete connected chordal graph has a clique separator")
    };
    let pieces = g.components_within(within.difference(separator));
    let left = separator.union(pieces[0]);
    let right = within.difference(pieces[0]);
    T1Node::Gluing {
        vertices: within,
        separator,
        left: Box::new(decompose(g, left)),
        right: Box::new(decompose(g, right)),
    }
}

/// Independently re-checks a certificate for the full subcomplex on `within`.
pub fn verify_t1_certificate(cert: &T1Node, g: &Graph, within: VertexSet) -> std::result::Result<(), String> {
    if cert.vertices() != within {
        return Err(format!(
            "certificate covers {:?}, expected {:?}",
            cert.vertices(),
            within
        ));
    }
    // the empty complex is the (−1)-simplex; empty leaves are rejected everywhere else
    if within.is_empty() && matches!(cert, T1Node::Simplex { .. }) {
        return Ok(());
    }
    check_node(cert, g)
}

fn check_node(node: &T1Node, g: &Graph) -> std::result::Result<(), String> {
    match node {
        T1Node::Simplex { vertices } => {
            if vertices.is_empty() {
                return Err("empty simplex leaf".into());
            }
            if !g.is_clique(*vertices) {
                return Err(format!("leaf {vertices:?} is not a simplex"));
            }
            Ok(())
        }
        T1Node::Gluing {
            vertices,
            separator,
            left,
            right,
        } => {
            check_gluing(g, *vertices, *separator, left.vertices(), right.vertices())?;
            if !g.is_clique(*separator) {
                return Err(format!("separator {separator:?} is not a simplex"));
            }
            check_node(left, g)?;
            check_node(right, g)
        }
    }
}

/// Shape conditions shared by every gluing `L₁ ∪_{L₀} L₂` of full subcomplexes.
pub(crate) fn check_gluing(
    g: &Graph,
    whole: VertexSet,
    separator: VertexSet,
    left: VertexSet,
    right: VertexSet,
) -> std::result::Result<(), String> {
    if left.union(right) != whole {
        return Err(format!("pieces do not cover {whole:?}"));
    }
    if left.intersection(right) != separator {
        return Err(format!("separator {separator:?} is not the intersection of the pieces"));
    }
    if left == whole || right == whole {
        return Err(format!("gluing of {whole:?} is not proper"));
    }
    let a = left.difference(separator);
    let b = right.difference(separator);
    if a.iter().any(|v| !g.neighbours(v).is_disjoint(b)) {
        return Err(format!(
            "pieces of {whole:?} are joined by an edge outside the separator"
        ));
    }
    Ok(())
}
