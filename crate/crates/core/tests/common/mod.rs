#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raag_coherence::standard;
use raag_coherence::t1::T1Node;
use raag_coherence::tn::{TnCertificate, TnNode};
use raag_coherence::{Graph, SimplicialComplex, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::with_indices(n, &edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::with_indices(n, &edges).unwrap()
}

pub fn random_flag(rng: &mut impl Rng, n: usize, p: f64) -> SimplicialComplex {
    SimplicialComplex::from_graph(&random_graph(rng, n, p))
}

/// Each new vertex is attached to a random subset of a random maximal clique, so the
/// reverse insertion order is a perfect elimination order.
pub fn random_chordal_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let g = Graph::with_indices(v, &edges).unwrap();
        let cliques = g.maximal_cliques();
        let k = cliques[rng.gen_range(0..cliques.len())];
        for u in k.iter() {
            if rng.gen_bool(0.7) {
                edges.push((u, v));
            }
        }
    }
    Graph::with_indices(n, &edges).unwrap()
}

/// Whether `s` induces a cycle of length at least 4.
pub fn induces_long_cycle(g: &Graph, s: VertexSet) -> bool {
    s.len() >= 4 && s.iter().all(|v| g.neighbours(v).intersection(s).len() == 2) && g.is_connected_within(s)
}

pub fn has_long_induced_cycle(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0u128..1 << n).any(|bits| induces_long_cycle(g, VertexSet::from_bits(bits)))
}

/// Inclusion-minimal sets whose removal increases the number of components, by brute force.
pub fn brute_minimal_separators(g: &Graph, within: VertexSet) -> Vec<VertexSet> {
    let items = within.to_vec();
    let base = g.components_within(within).len();
    let separating: Vec<VertexSet> = (0u64..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect::<VertexSet>()
        })
        .filter(|&s| g.components_within(within.difference(s)).len() > base)
        .collect();
    let mut out: Vec<VertexSet> = separating
        .iter()
        .copied()
        .filter(|&s| !separating.iter().any(|&t| t != s && t.is_subset(s)))
        .collect();
    out.sort();
    out
}

pub fn rational_rank(dense: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = dense
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    // Laplace expansion along the first row; fine for the tiny minors used here
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors `d_k = gcd of k×k minors`.
pub fn smith_by_minors(dense: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = dense.len();
    let cols = dense.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(dense[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&m));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push((&g / &prev).abs());
        prev = g;
    }
    out
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Named complexes used across the suites.
pub fn corpus() -> Vec<(String, SimplicialComplex)> {
    let mut out: Vec<(String, SimplicialComplex)> = vec![
        ("empty".into(), SimplicialComplex::empty()),
        ("point".into(), standard::simplex(0)),
        ("edge".into(), standard::simplex(1)),
        ("tetrahedron".into(), standard::simplex(3)),
        ("path5".into(), standard::path(5)),
        ("octahedron".into(), standard::octahedron()),
        ("sphere3".into(), standard::sphere(3)),
        ("example".into(), standard::double_suspension_of_triangle_and_point()),
        ("cone-c5".into(), standard::cycle(5).cone("x").unwrap()),
        ("suspension-c5".into(), standard::cycle(5).suspend("a", "b").unwrap()),
        (
            "c4+edge".into(),
            standard::cycle(4).disjoint_union(&standard::path(2)).unwrap(),
        ),
        ("c4*path3".into(), standard::cycle(4).join(&standard::path(3)).unwrap()),
        ("points3".into(), SimplicialComplex::points(&["a", "b", "c"])),
    ];
    for m in 4..=8 {
        out.push((format!("cycle{m}"), standard::cycle(m)));
    }
    let mut r = rng(20_261_016);
    for i in 0..6 {
        out.push((format!("random{i}"), random_flag(&mut r, 7 + i % 2, 0.5)));
    }
    for i in 0..3 {
        out.push((
            format!("chordal{i}"),
            SimplicialComplex::from_graph(&random_chordal_graph(&mut r, 8)),
        ));
    }
    out
}

fn toggle(s: VertexSet, v: usize) -> VertexSet {
    if s.contains(v) {
        s.without(v)
    } else {
        s.with(v)
    }
}

fn tn_nth_mut<'a>(node: &'a mut TnNode, k: &mut usize) -> Option<&'a mut TnNode> {
    if *k == 0 {
        return Some(node);
    }
    *k -= 1;
    match node {
        TnNode::Cone { base, .. } => tn_nth_mut(base, k),
        TnNode::Gluing { left, right, .. } => match tn_nth_mut(left, k) {
            Some(x) => Some(x),
            None => tn_nth_mut(right, k),
        },
        _ => None,
    }
}

fn set_vertices(node: &mut TnNode, new: VertexSet) {
    match node {
        TnNode::Simplex { vertices }
        | TnNode::LowDim { vertices, .. }
        | TnNode::TopBettiZero { vertices, .. }
        | TnNode::Cone { vertices, .. }
        | TnNode::Gluing { vertices, .. } => *vertices = new,
    }
}

/// Applies one random corruption that no valid certificate survives.
pub fn corrupt_tn(cert: &TnCertificate, vertex_count: usize, rng: &mut impl Rng) -> TnCertificate {
    let mut cert = cert.clone();
    let mut k = rng.gen_range(0..cert.root.node_count());
    let node = tn_nth_mut(&mut cert.root, &mut k).expect("index in range");
    let v = rng.gen_range(0..vertex_count.max(1));
    match (rng.gen_range(0..3), &mut *node) {
        (0, n) => {
            let new = toggle(n.vertices(), v);
            set_vertices(n, new);
        }
        (
            _,
            TnNode::Gluing {
                separator,
                separator_certificate,
                ..
            },
        ) => {
            if !separator.is_empty() && separator_certificate.is_some() && rng.gen_bool(0.3) {
                *separator_certificate = None;
            } else {
                *separator = toggle(*separator, v);
            }
        }
        (_, TnNode::Cone { vertices, apex, .. }) => {
            let others: Vec<usize> = vertices.without(*apex).to_vec();
            *apex = others[rng.gen_range(0..others.len())];
        }
        (_, TnNode::LowDim { dimension, .. }) | (_, TnNode::TopBettiZero { dimension, .. }) => {
            *dimension += if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        (_, TnNode::Simplex { vertices }) => *vertices = toggle(*vertices, v),
    }
    cert
}

fn t1_nth_mut<'a>(node: &'a mut T1Node, k: &mut usize) -> Option<&'a mut T1Node> {
    if *k == 0 {
        return Some(node);
    }
    *k -= 1;
    match node {
        T1Node::Gluing { left, right, .. } => match t1_nth_mut(left, k) {
            Some(x) => Some(x),
            None => t1_nth_mut(right, k),
        },
        _ => None,
    }
}

pub fn corrupt_t1(cert: &T1Node, vertex_count: usize, rng: &mut impl Rng) -> T1Node {
    let mut cert = cert.clone();
    let mut k = rng.gen_range(0..cert.node_count());
    let node = t1_nth_mut(&mut cert, &mut k).expect("index in range");
    let v = rng.gen_range(0..vertex_count.max(1));
    match node {
        T1Node::Simplex { vertices } => *vertices = toggle(*vertices, v),
        T1Node::Gluing {
            vertices, separator, ..
        } => match rng.gen_range(0..3) {
            0 => *vertices = toggle(*vertices, v),
            1 => *separator = toggle(*separator, v),
            _ => {
                *node = T1Node::Simplex { vertices: *vertices };
            }
        },
    }
    cert
}
