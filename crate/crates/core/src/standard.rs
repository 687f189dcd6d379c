//! Small named complexes used in examples and tests.

use crate::complex::SimplicialComplex;
use crate::graph::Graph;

/// The full simplex `Δᵏ` on vertices `v0..vk`.
pub fn simplex(k: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
    SimplicialComplex::from_facets(labels, &[(0..=k).collect()]).unwrap()
}

/// Flag complex of the cycle graph `Cₘ` (m ≥ 4) on vertices `c0..c{m-1}`.
pub fn cycle(m: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
    let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    SimplicialComplex::from_graph(&Graph::new(labels, &edges).unwrap())
}

/// Flag complex of the path graph on `p0..p{n-1}`.
pub fn path(n: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    SimplicialComplex::from_graph(&Graph::new(labels, &edges).unwrap())
}

/// `S⁰` on the given labels.
pub fn zero_sphere(a: &str, b: &str) -> SimplicialComplex {
    SimplicialComplex::points(&[a, b])
}

/// The `k`-fold suspension of `S⁰`, a flag `k`-sphere on `2k + 2` vertices.
pub fn sphere(k: usize) -> SimplicialComplex {
    (1..=k).fold(zero_sphere("n0", "s0"), |acc, i| {
        acc.suspend(&format!("n{i}"), &format!("s{i}")).unwrap()
    })
}

/// The octahedral flag 2-sphere.
pub fn octahedron() -> SimplicialComplex {
    sphere(2)
}

/// Twofold suspension of a triangle plus an isolated point: a flag complex of
/// dimension 4 on 8 vertices that is homotopy equivalent to `S²`.
///
/// Vertex order: `n1 s1 n2 s2 t0 t1 t2 p`.
pub fn double_suspension_of_triangle_and_point() -> SimplicialComplex {
    let tri = SimplicialComplex::from_facets(vec!["t0".into(), "t1".into(), "t2".into()], &[vec![0, 1, 2]]).unwrap();
    let base = tri.disjoint_union(&SimplicialComplex::points(&["p"])).unwrap();
    zero_sphere("n1", "s1")
        .join(&zero_sphere("n2", "s2"))
        .unwrap()
        .join(&base)
        .unwrap()
}
