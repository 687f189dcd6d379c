//! JSON input and canonical output of graphs and complexes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The two accepted input shapes, discriminated by `"format"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", deny_unknown_fields)]
pub enum InputDocument {
    #[serde(rename = "flag-graph")]
    FlagGraph {
        vertices: Vec<String>,
        edges: Vec<[String; 2]>,
    },
    #[serde(rename = "complex")]
    Complex {
        vertices: Vec<String>,
        facets: Vec<Vec<String>>,
    },
}

impl InputDocument {
    pub fn into_complex(self) -> Result<SimplicialComplex> {
        match self {
            InputDocument::FlagGraph { vertices, edges } => {
                let pairs: Vec<(&str, &str)> = edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
                let g = Graph::from_labelled_edges(vertices, &pairs)?;
                Ok(SimplicialComplex::from_graph(&g))
            }
            InputDocument::Complex { vertices, facets } => SimplicialComplex::from_labelled_facets(vertices, &facets),
        }
    }

    /// Canonical `complex` document: vertices in input order, facets sorted
    /// lexicographically by index lists.
    pub fn canonical(complex: &SimplicialComplex) -> Self {
        let labels = complex.labels();
        InputDocument::Complex {
            vertices: labels.to_vec(),
            facets: complex
                .facets()
                .iter()
                .map(|f| f.iter().map(|v| labels[v].clone()).collect())
                .collect(),
        }
    }

    pub fn flag_graph(g: &Graph) -> Self {
        let labels = g.labels();
        InputDocument::FlagGraph {
            vertices: labels.to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(u, v)| [labels[u].clone(), labels[v].clone()])
                .collect(),
        }
    }
}

/// Flat mirror of [`InputDocument`]; deserialising a plain struct keeps serde_json's
/// line and column information for type errors.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    format: String,
    vertices: Vec<String>,
    #[serde(default)]
    edges: Option<Vec<[String; 2]>>,
    #[serde(default)]
    facets: Option<Vec<Vec<String>>>,
}

pub fn parse_document(text: &str, origin: &str) -> Result<InputDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Json {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match (raw.format.as_str(), raw.edges, raw.facets) {
        ("flag-graph", Some(edges), None) => Ok(InputDocument::FlagGraph {
            vertices: raw.vertices,
            edges,
        }),
        ("complex", None, Some(facets)) => Ok(InputDocument::Complex {
            vertices: raw.vertices,
            facets,
        }),
        ("flag-graph", _, _) => Err(Error::InvalidInput(format!(
            "{origin}: a flag-graph document needs `edges` and no `facets`"
        ))),
        ("complex", _, _) => Err(Error::InvalidInput(format!(
            "{origin}: a complex document needs `facets` and no `edges`"
        ))),
        (other, _, _) => Err(Error::InvalidInput(format!(
            "{origin}: unknown format `{other}` (expected `flag-graph` or `complex`)"
        ))),
    }
}

pub fn parse_complex(text: &str, origin: &str) -> Result<SimplicialComplex> {
    parse_document(text, origin)?.into_complex()
}

pub fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_complex(&text, &path.display().to_string())
}

pub fn to_canonical_json(complex: &SimplicialComplex) -> String {
    serde_json::to_string(&InputDocument::canonical(complex)).expect("serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn flag_graph_document() {
        let text = r#"{"format":"flag-graph","vertices":["a","b","c","d"],
            "edges":[["a","b"],["b","c"],["c","d"],["d","a"]]}"#;
        let l = parse_complex(text, "sq.json").unwrap();
        assert_eq!(l.f_vector(), vec![4, 4]);
        assert!(l.is_flag());
    }

    #[test]
    fn canonical_output_is_bit_exact() {
        let text = r#"{"format":"complex","vertices":["x","y","z","w"],"facets":[["z","y"],["w"],["x","y"]]}"#;
        let l = parse_complex(text, "c.json").unwrap();
        assert_eq!(
            to_canonical_json(&l),
            r#"{"format":"complex","vertices":["x","y","z","w"],"facets":[["x","y"],["y","z"],["w"]]}"#
        );
        let again = parse_complex(&to_canonical_json(&l), "again").unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn errors_carry_position_and_path() {
        let err = parse_complex("{\"format\":\"complex\",\n \"vertices\": [1]}", "bad.json").unwrap_err();
        match err {
            Error::Json { path, line, .. } => {
                assert_eq!(path, "bad.json");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"format":"flag-graph","vertices":["a"],"edges":[["a","b"]]}"#;
        assert!(matches!(parse_complex(unknown, "u"), Err(Error::UnknownVertex(_))));
        let wrong = r#"{"format":"complex","vertices":["a"],"edges":[]}"#;
        assert!(matches!(parse_complex(wrong, "w"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn example_round_trip() {
        let l = standard::double_suspension_of_triangle_and_point();
        let back = parse_complex(&to_canonical_json(&l), "ex").unwrap();
        assert_eq!(back, l);
    }
}
