use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::extnat::ExtNat;

/// `(n, m)` with `n < m`: every subgroup of type `Fₙ` is of type `F_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoherencePair {
    pub n: ExtNat,
    pub m: ExtNat,
}

impl CoherencePair {
    pub fn new(n: impl Into<ExtNat>, m: impl Into<ExtNat>) -> Option<Self> {
        let (n, m) = (n.into(), m.into());
        (n < m).then_some(CoherencePair { n, m })
    }

    /// `(n, ∞)`.
    pub fn to_infinity(n: u32) -> Self {
        CoherencePair {
            n: ExtNat::Fin(n),
            m: ExtNat::Inf,
        }
    }

    /// `(n, n+1)`.
    pub fn step(n: u32) -> Self {
        CoherencePair {
            n: ExtNat::Fin(n),
            m: ExtNat::Fin(n + 1),
        }
    }

    /// Whether `(n,m)`-coherence gives `other`-coherence, i.e. `n ≤ n′ < m′ ≤ m`.
    pub fn implies(self, other: CoherencePair) -> bool {
        self.n <= other.n && other.m <= self.m
    }
}

impl fmt::Display for CoherencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: ExtNat| match v {
            ExtNat::Fin(x) => x.to_string(),
            ExtNat::Inf => "∞".to_string(),
        };
        write!(f, "({},{})", show(self.n), show(self.m))
    }
}

impl Serialize for CoherencePair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.n, self.m).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoherencePair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (n, m) = <(ExtNat, ExtNat)>::deserialize(deserializer)?;
        CoherencePair::new(n, m).ok_or_else(|| D::Error::custom(format!("pair ({n},{m}) needs n < m")))
    }
}

/// Pairs with finite entries up to `bound` (and `m = ∞`), ordered so that stronger
/// statements come first: `n` ascending, then `m` descending.
pub fn pair_grid(bound: u32) -> Vec<CoherencePair> {
    let mut out = Vec::new();
    for n in 0..=bound {
        out.push(CoherencePair::to_infinity(n));
        for m in (n + 1..=bound + 1).rev() {
            out.push(CoherencePair::new(n, m).expect("n < m"));
        }
    }
    out
}

/// First `(positive, negative)` index pair where a positive implies a negative.
pub fn find_contradiction(positive: &[CoherencePair], negative: &[CoherencePair]) -> Option<(usize, usize)> {
    positive
        .iter()
        .enumerate()
        .find_map(|(i, p)| negative.iter().position(|q| p.implies(*q)).map(|j| (i, j)))
}

/// Drops pairs implied by another pair in the list (keeps first of equal pairs).
pub fn maximal_pairs(pairs: &[CoherencePair]) -> Vec<CoherencePair> {
    let mut out: Vec<CoherencePair> = Vec::new();
    for &p in pairs {
        if out.iter().any(|q| q.implies(p)) {
            continue;
        }
        out.retain(|q| !p.implies(*q));
        out.push(p);
    }
    out.sort();
    out
}

/// Drops negatives implied by a weaker negative in the list.
pub fn minimal_negatives(pairs: &[CoherencePair]) -> Vec<CoherencePair> {
    let mut out: Vec<CoherencePair> = Vec::new();
    for &p in pairs {
        if out.iter().any(|q| p.implies(*q)) {
            continue;
        }
        out.retain(|q| !q.implies(p));
        out.push(p);
    }
    out.sort();
    out
}
