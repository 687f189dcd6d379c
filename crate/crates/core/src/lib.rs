//! Analysis of finite flag complexes and the higher coherence of their right-angled
//! Artin groups.
//!
//! The crate combines chordality recognition, exact simplicial homology, a certifier
//! for the recursive classes `𝒯ₙ`, a Bestvina–Brady obstruction scanner, and a
//! forward-chaining calculus of `(n,m)`-coherence facts with proof traces.

pub mod calculus;
pub mod chordal;
pub mod complex;
pub mod connectivity;
pub mod error;
pub mod extnat;
pub mod graph;
pub mod homology;
pub mod input;
pub mod linalg;
pub mod obstruction;
pub mod pi1;
pub mod report;
pub mod standard;
pub mod t1;
pub mod tn;
pub mod vertex_set;

pub use complex::SimplicialComplex;
pub use error::{Error, Result};
pub use extnat::ExtNat;
pub use graph::Graph;
pub use vertex_set::{VertexSet, MAX_VERTICES};
