use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("vertex label `{0}` occurs in both complexes")]
    LabelCollision(String),

    #[error("too many vertices: {count} (maximum supported is {max})")]
    TooManyVertices { count: usize, max: usize },

    #[error("complex is not flag: clique {0:?} spans no simplex")]
    NotFlag(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("derived facts contradict each other: {0}")]
    Inconsistent(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
