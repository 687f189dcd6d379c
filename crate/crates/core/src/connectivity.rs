//! Sound connectivity certificates (Hurewicz plus a bounded π₁ check) and the
//! finiteness properties of Bestvina–Brady kernels they determine.

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{betti_rational, integral_homology, HomologySummary};
use crate::pi1::{edge_path_presentation, simplify, TietzeMove, DEFAULT_TIETZE_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Nonempty,
    Empty,
    Connected,
    Disconnected {
        components: usize,
    },
    /// A vertex lying in every facet: the complex is a cone, hence contractible.
    Cone {
        apex: usize,
    },
    /// Nonzero reduced homology in `degree`.
    Homology {
        degree: usize,
        rational_rank: usize,
        torsion: Vec<String>,
    },
    /// Trivial π₁ (by Tietze transcript) and vanishing reduced homology through `degree`.
    SimplyConnectedAcyclic {
        degree: usize,
        transcript: Vec<TietzeMove>,
    },
    /// π₁ simplification stalled or ran out of budget.
    Pi1Undetermined {
        budget: usize,
        cost: usize,
        remaining_generators: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriStatus {
    pub status: Tri,
    pub evidence: Evidence,
}

impl TriStatus {
    fn yes(evidence: Evidence) -> Self {
        TriStatus {
            status: Tri::Yes,
            evidence,
        }
    }

    fn no(evidence: Evidence) -> Self {
        TriStatus {
            status: Tri::No,
            evidence,
        }
    }

    fn unknown(evidence: Evidence) -> Self {
        TriStatus {
            status: Tri::Unknown,
            evidence,
        }
    }
}

/// Lazily computed connectivity data for one complex.
pub struct ConnectivityProbe<'a> {
    complex: &'a SimplicialComplex,
    pi1_budget: usize,
    components: OnceCell<usize>,
    rational: OnceCell<HomologySummary>,
    integral: OnceCell<HomologySummary>,
    pi1: OnceCell<TriStatus>,
}

impl<'a> ConnectivityProbe<'a> {
    pub fn new(complex: &'a SimplicialComplex, pi1_budget: usize) -> Self {
        ConnectivityProbe {
            complex,
            pi1_budget,
            components: OnceCell::new(),
            rational: OnceCell::new(),
            integral: OnceCell::new(),
            pi1: OnceCell::new(),
        }
    }

    fn component_count(&self) -> usize {
        *self
            .components
            .get_or_init(|| self.complex.connected_components().len())
    }

    fn rational(&self) -> &HomologySummary {
        self.rational.get_or_init(|| betti_rational(self.complex))
    }

    fn integral(&self) -> &HomologySummary {
        self.integral.get_or_init(|| integral_homology(self.complex))
    }

    fn apex(&self) -> Option<usize> {
        self.complex.apexes().first()
    }

    /// π₁ status; the complex must be connected and nonempty.
    pub fn pi1(&self) -> &TriStatus {
        self.pi1.get_or_init(|| {
            if let Some(apex) = self.apex() {
                return TriStatus::yes(Evidence::Cone { apex });
            }
            let h = self.integral();
            if !h.reduced_integral_vanishes(1) {
                return TriStatus::no(Evidence::Homology {
                    degree: 1,
                    rational_rank: h.reduced_betti_at(1),
                    torsion: h.torsion_at(1).to_vec(),
                });
            }
            let p = edge_path_presentation(self.complex).expect("connected nonempty");
            let s = simplify(&p, self.pi1_budget);
            if s.trivial {
                TriStatus::yes(Evidence::SimplyConnectedAcyclic {
                    degree: 1,
                    transcript: s.transcript,
                })
            } else {
                TriStatus::unknown(Evidence::Pi1Undetermined {
                    budget: self.pi1_budget,
                    cost: s.cost,
                    remaining_generators: s.remaining_generators,
                })
            }
        })
    }

    /// First degree in `1..=k` with nonzero reduced integral homology.
    fn homology_obstruction(&self, k: usize) -> Option<Evidence> {
        let top = k.min(self.complex.dimension().max(0) as usize);
        let q = self.rational();
        if let Some(d) = (1..=top).find(|&d| q.reduced_betti_at(d) != 0) {
            let torsion = self.integral().torsion_at(d).to_vec();
            return Some(Evidence::Homology {
                degree: d,
                rational_rank: q.reduced_betti_at(d),
                torsion,
            });
        }
        let z = self.integral();
        (1..=top)
            .find(|&d| !z.reduced_integral_vanishes(d))
            .map(|d| Evidence::Homology {
                degree: d,
                rational_rank: 0,
                torsion: z.torsion_at(d).to_vec(),
            })
    }

    /// Whether the complex is `k`-connected (`k ≥ -1`).
    pub fn status(&self, k: i32) -> TriStatus {
        if self.complex.is_empty() {
            return TriStatus::no(Evidence::Empty);
        }
        if k < 0 {
            return TriStatus::yes(Evidence::Nonempty);
        }
        let components = self.component_count();
        if components != 1 {
            return TriStatus::no(Evidence::Disconnected { components });
        }
        if k == 0 {
            return TriStatus::yes(Evidence::Connected);
        }
        if let Some(apex) = self.apex() {
            return TriStatus::yes(Evidence::Cone { apex });
        }
        if let Some(e) = self.homology_obstruction(k as usize) {
            return TriStatus::no(e);
        }
        match self.pi1() {
            TriStatus {
                status: Tri::Yes,
                evidence: Evidence::SimplyConnectedAcyclic { transcript, .. },
            } => TriStatus::yes(Evidence::SimplyConnectedAcyclic {
                degree: k as usize,
                transcript: transcript.clone(),
            }),
            other => other.clone(),
        }
    }
}

/// Whether `π₁(L)` is trivial: No when `H₁ ≠ 0`, Yes when bounded Tietze simplification
/// empties the presentation, Unknown otherwise.
pub fn pi1_trivial(complex: &SimplicialComplex, budget: usize) -> Result<TriStatus> {
    if complex.is_empty() || !complex.is_connected() {
        return Err(Error::Precondition(
            "π₁ triviality needs a connected nonempty complex".into(),
        ));
    }
    Ok(ConnectivityProbe::new(complex, budget).pi1().clone())
}

pub fn connectivity_status(complex: &SimplicialComplex, k: i32) -> TriStatus {
    connectivity_status_with_budget(complex, k, DEFAULT_TIETZE_BUDGET)
}

pub fn connectivity_status_with_budget(complex: &SimplicialComplex, k: i32, pi1_budget: usize) -> TriStatus {
    ConnectivityProbe::new(complex, pi1_budget).status(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessEntry {
    /// Whether the Bestvina–Brady kernel is of type `Fₙ`, i.e. `L` is `(n-1)`-connected.
    pub n: u32,
    pub status: TriStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbFiniteness {
    pub types: Vec<FinitenessEntry>,
    /// Type `F∞`: decided Yes when `L` is contractible (simply connected and acyclic).
    pub f_infinity: Tri,
}

impl BbFiniteness {
    /// Largest `n ≤ maxN` with a certified Yes for every `m ≤ n`.
    pub fn certified_up_to(&self) -> u32 {
        self.types
            .iter()
            .take_while(|e| e.status.status == Tri::Yes)
            .map(|e| e.n)
            .last()
            .unwrap_or(0)
    }
}

/// Finiteness types `F₁..F_maxN` of the kernel of `A_L → ℤ`.
pub fn bb_finiteness(complex: &SimplicialComplex, max_n: u32, pi1_budget: usize) -> Result<BbFiniteness> {
    if max_n < 1 {
        return Err(Error::Precondition("maxN must be at least 1".into()));
    }
    let probe = ConnectivityProbe::new(complex, pi1_budget);
    let types: Vec<FinitenessEntry> = (1..=max_n)
        .map(|n| FinitenessEntry {
            n,
            status: probe.status(n as i32 - 1),
        })
        .collect();
    let f_infinity = if types.iter().any(|e| e.status.status == Tri::No) {
        Tri::No
    } else {
        probe.status(complex.dimension().max(1)).status
    };
    Ok(BbFiniteness { types, f_infinity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn example_is_simply_connected_but_not_two_connected() {
        let l = standard::double_suspension_of_triangle_and_point();
        assert_eq!(connectivity_status(&l, 1).status, Tri::Yes);
        let two = connectivity_status(&l, 2);
        assert_eq!(two.status, Tri::No);
        assert!(matches!(two.evidence, Evidence::Homology { degree: 2, .. }));
    }

    #[test]
    fn square_connectivity() {
        let l = standard::cycle(4);
        assert_eq!(connectivity_status(&l, -1).status, Tri::Yes);
        assert_eq!(connectivity_status(&l, 0).status, Tri::Yes);
        assert_eq!(connectivity_status(&l, 1).status, Tri::No);
        assert_eq!(pi1_trivial(&l, 100).unwrap().status, Tri::No);
    }

    #[test]
    fn empty_and_disconnected() {
        let e = SimplicialComplex::empty();
        assert_eq!(connectivity_status(&e, -1).status, Tri::No);
        let two = SimplicialComplex::points(&["a", "b"]);
        assert_eq!(connectivity_status(&two, -1).status, Tri::Yes);
        assert_eq!(connectivity_status(&two, 0).status, Tri::No);
        assert!(pi1_trivial(&two, 10).is_err());
    }

    #[test]
    fn pi1_of_simplex_and_octahedron() {
        assert_eq!(pi1_trivial(&standard::simplex(3), 10).unwrap().status, Tri::Yes);
        assert_eq!(
            pi1_trivial(&standard::octahedron(), DEFAULT_TIETZE_BUDGET)
                .unwrap()
                .status,
            Tri::Yes
        );
    }

    #[test]
    fn bb_types() {
        let simplex = bb_finiteness(&standard::simplex(3), 4, DEFAULT_TIETZE_BUDGET).unwrap();
        assert!(simplex.types.iter().all(|e| e.status.status == Tri::Yes));
        assert_eq!(simplex.f_infinity, Tri::Yes);

        let two = bb_finiteness(&SimplicialComplex::points(&["a", "b"]), 3, 10).unwrap();
        assert_eq!(two.types[0].status.status, Tri::No);
        assert_eq!(two.f_infinity, Tri::No);

        let ex = bb_finiteness(
            &standard::double_suspension_of_triangle_and_point(),
            4,
            DEFAULT_TIETZE_BUDGET,
        )
        .unwrap();
        let statuses: Vec<Tri> = ex.types.iter().map(|e| e.status.status).collect();
        assert_eq!(statuses, vec![Tri::Yes, Tri::Yes, Tri::No, Tri::No]);
        assert_eq!(ex.certified_up_to(), 2);
    }
}
