//! Simplicial chain complexes and their homology over ℚ and ℤ.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::linalg::{rank_rational, smith_form, SparseMatrix};
use crate::vertex_set::VertexSet;

/// Simplices of each degree in canonical order, and the boundary maps between them.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub simplices: Vec<Vec<VertexSet>>,
    /// `boundaries[k]` is `∂ₖ : Cₖ → Cₖ₋₁` for `k ≥ 1`; `boundaries[0]` is the zero map.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplexData {
    pub fn new(complex: &SimplicialComplex) -> Self {
        let top = complex.dimension();
        let simplices: Vec<Vec<VertexSet>> = (0..=top).map(|k| complex.simplices(k as usize)).collect();
        let mut boundaries = Vec::with_capacity(simplices.len());
        if let Some(vertices) = simplices.first() {
            boundaries.push(SparseMatrix::zero(0, vertices.len()));
        }
        for k in 1..simplices.len() {
            boundaries.push(boundary_matrix(&simplices[k], &simplices[k - 1]));
        }
        let data = ChainComplexData { simplices, boundaries };
        assert!(data.boundary_squares_to_zero(), "∂∘∂ ≠ 0");
        data
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }
}

/// Boundary of each `k`-simplex in `upper` over the `(k-1)`-simplices in `lower`.
/// Removing the `i`-th smallest vertex contributes sign `(-1)^i`.
fn boundary_matrix(upper: &[VertexSet], lower: &[VertexSet]) -> SparseMatrix {
    let index: HashMap<VertexSet, usize> = lower.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut m = SparseMatrix::zero(lower.len(), upper.len());
    for (j, &s) in upper.iter().enumerate() {
        let mut col: Vec<(usize, i64)> = s
            .iter()
            .enumerate()
            .map(|(i, v)| (index[&s.without(v)], if i % 2 == 0 { 1 } else { -1 }))
            .collect();
        col.sort_unstable();
        m.columns[j] = col;
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Q,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub simplices: usize,
    pub betti: usize,
    pub reduced_betti: usize,
    /// Free rank of `Hₖ(L;ℤ)`; present for integral coefficients.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub integral_rank: Option<usize>,
    /// Torsion invariant factors of `Hₖ(L;ℤ)`, as decimal strings.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torsion: Option<Vec<String>>,
}

/// Homology in degrees `0..=dim L`. The reduced homology of the empty complex is
/// concentrated in degree −1 and is flagged by `empty`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub coefficients: Coefficients,
    pub dimension: i32,
    pub empty: bool,
    pub degrees: Vec<DegreeHomology>,
    pub euler_characteristic: i64,
}

impl HomologySummary {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn reduced_betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.reduced_betti).collect()
    }

    /// Reduced rational Betti number in degree `k` (0 beyond the dimension).
    pub fn reduced_betti_at(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.reduced_betti)
    }

    pub fn torsion_at(&self, k: usize) -> &[String] {
        self.degrees.get(k).and_then(|d| d.torsion.as_deref()).unwrap_or(&[])
    }

    /// Whether reduced integral homology vanishes in degree `k`. Requires integral data.
    pub fn reduced_integral_vanishes(&self, k: usize) -> bool {
        match self.degrees.get(k) {
            None => true,
            Some(d) => {
                let rank = d.integral_rank.expect("integral homology required");
                let reduced = if k == 0 { rank.saturating_sub(1) } else { rank };
                reduced == 0 && d.torsion.as_ref().is_none_or(Vec::is_empty)
            }
        }
    }

    /// Alternating sum of Betti numbers.
    pub fn betti_euler(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| {
                if d.degree % 2 == 0 {
                    d.betti as i64
                } else {
                    -(d.betti as i64)
                }
            })
            .sum()
    }
}

pub fn homology(complex: &SimplicialComplex, coefficients: Coefficients) -> HomologySummary {
    let data = ChainComplexData::new(complex);
    homology_of_chain_complex(&data, coefficients, complex.dimension())
}

/// Rational Betti numbers (reduced and unreduced).
pub fn betti_rational(complex: &SimplicialComplex) -> HomologySummary {
    homology(complex, Coefficients::Q)
}

/// Integral homology via Smith normal form; also carries the rational Betti numbers.
pub fn integral_homology(complex: &SimplicialComplex) -> HomologySummary {
    homology(complex, Coefficients::Z)
}

pub fn homology_of_chain_complex(
    data: &ChainComplexData,
    coefficients: Coefficients,
    dimension: i32,
) -> HomologySummary {
    let counts = data.counts();
    let top = counts.len();
    // ranks[k] = rank ∂ₖ, with ∂₀ = 0 and ∂_{top} = 0
    let ranks: Vec<usize> = (0..=top)
        .into_par_iter()
        .map(|k| {
            if k == 0 || k == top {
                0
            } else {
                rank_rational(&data.boundaries[k])
            }
        })
        .collect();
    let smith: Option<Vec<(usize, Vec<BigInt>)>> = (coefficients == Coefficients::Z).then(|| {
        (0..=top)
            .into_par_iter()
            .map(|k| {
                if k == 0 || k == top {
                    (0, Vec::new())
                } else {
                    let s = smith_form(&data.boundaries[k]);
                    (s.rank(), s.torsion())
                }
            })
            .collect()
    });
    let degrees = (0..top)
        .map(|k| {
            let betti = counts[k] - ranks[k] - ranks[k + 1];
            let reduced_betti = if k == 0 { betti - 1 } else { betti };
            let (integral_rank, torsion) = match &smith {
                Some(s) => (
                    Some(counts[k] - s[k].0 - s[k + 1].0),
                    Some(s[k + 1].1.iter().map(|d| d.to_string()).collect()),
                ),
                None => (None, None),
            };
            DegreeHomology {
                degree: k,
                simplices: counts[k],
                betti,
                reduced_betti,
                integral_rank,
                torsion,
            }
        })
        .collect();
    let euler_characteristic = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    HomologySummary {
        coefficients,
        dimension,
        empty: counts.is_empty(),
        degrees,
        euler_characteristic,
    }
}
