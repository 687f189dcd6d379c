use std::fmt;
use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::extnat::ExtNat;

use super::pair::CoherencePair;

/// A flag complex together with the name it was loaded under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedComplex {
    pub source: String,
    pub complex: Arc<SimplicialComplex>,
}

impl NamedComplex {
    pub fn new(source: impl Into<String>, complex: SimplicialComplex) -> Self {
        NamedComplex {
            source: source.into(),
            complex: Arc::new(complex),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssumedFacts {
    pub positive: Vec<CoherencePair>,
    pub negative: Vec<CoherencePair>,
    /// Greatest `n` with the group known to be of type `Fₙ`.
    pub finiteness: Option<ExtNat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Trivial,
    FreeAbelian(u32),
    Free(u32),
    Raag(NamedComplex),
    DirectProduct(Vec<GroupExpr>),
    AmalgamOverRaag {
        left: Box<GroupExpr>,
        right: Box<GroupExpr>,
        over: NamedComplex,
    },
    GraphOfGroups {
        vertices: Vec<GroupExpr>,
        edges: Vec<GroupExpr>,
    },
    Extension {
        kernel: Box<GroupExpr>,
        quotient: Box<GroupExpr>,
    },
    Assumed {
        label: String,
        facts: AssumedFacts,
    },
}

impl GroupExpr {
    pub fn raag(source: impl Into<String>, complex: SimplicialComplex) -> Self {
        GroupExpr::Raag(NamedComplex::new(source, complex))
    }

    /// Canonical form used by the deduction engine: trivial factors dropped, nested
    /// products flattened, `F(0)`/`F(1)`/`Z^0` collapsed, and products with free
    /// abelian factors written as `ext(Z^k, rest)`. A graph of groups with one vertex
    /// and no edges becomes its vertex group.
    pub fn normalise(&self) -> GroupExpr {
        match self {
            GroupExpr::Free(0) | GroupExpr::FreeAbelian(0) => GroupExpr::Trivial,
            GroupExpr::Free(1) => GroupExpr::FreeAbelian(1),
            GroupExpr::DirectProduct(children) => {
                let mut rank = 0;
                let mut rest = Vec::new();
                let mut factors = Vec::new();
                flatten_product(children, &mut factors);
                for c in factors.into_iter().map(GroupExpr::normalise) {
                    match c {
                        GroupExpr::Trivial => {}
                        GroupExpr::FreeAbelian(k) => rank += k,
                        other => rest.push(other),
                    }
                }
                let rest = match rest.len() {
                    0 => None,
                    1 => rest.pop(),
                    _ => Some(GroupExpr::DirectProduct(rest)),
                };
                match (rank, rest) {
                    (0, None) => GroupExpr::Trivial,
                    (0, Some(r)) => r,
                    (k, None) => GroupExpr::FreeAbelian(k),
                    (k, Some(r)) => GroupExpr::Extension {
                        kernel: Box::new(GroupExpr::FreeAbelian(k)),
                        quotient: Box::new(r),
                    },
                }
            }
            GroupExpr::AmalgamOverRaag { left, right, over } => GroupExpr::AmalgamOverRaag {
                left: Box::new(left.normalise()),
                right: Box::new(right.normalise()),
                over: over.clone(),
            },
            GroupExpr::GraphOfGroups { vertices, edges } if vertices.len() == 1 && edges.is_empty() => {
                vertices[0].normalise()
            }
            GroupExpr::GraphOfGroups { vertices, edges } => GroupExpr::GraphOfGroups {
                vertices: vertices.iter().map(GroupExpr::normalise).collect(),
                edges: edges.iter().map(GroupExpr::normalise).collect(),
            },
            GroupExpr::Extension { kernel, quotient } => GroupExpr::Extension {
                kernel: Box::new(kernel.normalise()),
                quotient: Box::new(quotient.normalise()),
            },
            other => other.clone(),
        }
    }
}

fn flatten_product<'a>(children: &'a [GroupExpr], out: &mut Vec<&'a GroupExpr>) {
    for c in children {
        match c {
            GroupExpr::DirectProduct(inner) => flatten_product(inner, out),
            other => out.push(other),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[GroupExpr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => write!(f, "1"),
            GroupExpr::FreeAbelian(k) => write!(f, "Z^{k}"),
            GroupExpr::Free(k) => write!(f, "F({k})"),
            GroupExpr::Raag(c) => write!(f, "raag({})", c.source),
            GroupExpr::DirectProduct(children) => {
                write!(f, "prod(")?;
                write_list(f, children)?;
                write!(f, ")")
            }
            GroupExpr::AmalgamOverRaag { left, right, over } => {
                write!(f, "amalgam({left}, {right}, over={})", over.source)
            }
            GroupExpr::GraphOfGroups { vertices, edges } => {
                write!(f, "gog(vertices=[")?;
                write_list(f, vertices)?;
                write!(f, "], edges=[")?;
                write_list(f, edges)?;
                write!(f, "])")
            }
            GroupExpr::Extension { kernel, quotient } => write!(f, "ext({kernel}, {quotient})"),
            GroupExpr::Assumed { label, facts } => {
                write!(f, "assume({label}, {{")?;
                let mut parts = Vec::new();
                parts.extend(facts.positive.iter().map(|p| format!("pos{}", pair_args(p))));
                parts.extend(facts.negative.iter().map(|p| format!("neg{}", pair_args(p))));
                if let Some(n) = facts.finiteness {
                    parts.push(format!("fin({n})"));
                }
                write!(f, "{}}})", parts.join(", "))
            }
        }
    }
}

fn pair_args(p: &CoherencePair) -> String {
    format!("({}, {})", p.n, p.m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_with_abelian_factors_become_extensions() {
        let e = GroupExpr::DirectProduct(vec![
            GroupExpr::Free(2),
            GroupExpr::FreeAbelian(2),
            GroupExpr::Free(1),
            GroupExpr::Trivial,
        ]);
        assert_eq!(e.normalise().to_string(), "ext(Z^3, F(2))");
        let nested = GroupExpr::DirectProduct(vec![e.clone(), GroupExpr::Free(2)]);
        assert_eq!(nested.normalise().to_string(), "ext(Z^3, prod(F(2), F(2)))");
        assert_eq!(
            GroupExpr::DirectProduct(vec![GroupExpr::Free(0)]).normalise(),
            GroupExpr::Trivial
        );
    }

    #[test]
    fn normalising_is_idempotent() {
        let e = GroupExpr::DirectProduct(vec![
            GroupExpr::FreeAbelian(1),
            GroupExpr::DirectProduct(vec![GroupExpr::Free(3), GroupExpr::FreeAbelian(1)]),
            GroupExpr::Free(2),
        ]);
        let once = e.normalise();
        assert_eq!(once.normalise(), once);
        assert_eq!(once.to_string(), "ext(Z^2, prod(F(3), F(2)))");
        // a written extension is not a product
        let ext = GroupExpr::Extension {
            kernel: Box::new(GroupExpr::FreeAbelian(1)),
            quotient: Box::new(GroupExpr::Free(2)),
        };
        let p = GroupExpr::DirectProduct(vec![ext, GroupExpr::Free(2)]);
        assert_eq!(p.normalise().to_string(), "prod(ext(Z^1, F(2)), F(2))");
    }
}
