use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A value in ℕ ∪ {∞}. `Inf` is greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u32),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtNat::Fin(v) => Some(v),
            ExtNat::Inf => None,
        }
    }

    /// `∞ - 1 = ∞`; `0 - 1` saturates at 0.
    pub fn pred(self) -> ExtNat {
        match self {
            ExtNat::Fin(v) => ExtNat::Fin(v.saturating_sub(1)),
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    /// `∞ + 1 = ∞`.
    pub fn succ(self) -> ExtNat {
        match self {
            ExtNat::Fin(v) => ExtNat::Fin(v + 1),
            ExtNat::Inf => ExtNat::Inf,
        }
    }
}

impl From<u32> for ExtNat {
    fn from(v: u32) -> Self {
        ExtNat::Fin(v)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(v) => write!(f, "{v}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "∞" => Ok(ExtNat::Inf),
            _ => s
                .parse::<u32>()
                .map(ExtNat::Fin)
                .map_err(|_| format!("expected a natural number or `inf`, got `{s}`")),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(v) => serializer.serialize_u32(*v),
            ExtNat::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a natural number or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                u32::try_from(v)
                    .map(ExtNat::Fin)
                    .map_err(|_| E::custom("value too large"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u32::try_from(v)
                    .map(ExtNat::Fin)
                    .map_err(|_| E::custom("expected a natural number"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_conventions() {
        assert_eq!(ExtNat::Inf.pred(), ExtNat::Inf);
        assert_eq!(ExtNat::Inf.succ(), ExtNat::Inf);
        assert_eq!(ExtNat::Fin(3).pred(), ExtNat::Fin(2));
        assert!(ExtNat::Fin(u32::MAX) < ExtNat::Inf);
        assert!(ExtNat::Fin(2) < ExtNat::Fin(3));
    }

    #[test]
    fn json_uses_inf_string() {
        assert_eq!(serde_json::to_string(&ExtNat::Inf).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&ExtNat::Fin(4)).unwrap(), "4");
        let v: Vec<ExtNat> = serde_json::from_str("[2, \"inf\"]").unwrap();
        assert_eq!(v, vec![ExtNat::Fin(2), ExtNat::Inf]);
    }
}
