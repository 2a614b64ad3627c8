use thiserror::Error;

use crate::model::Report;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("illegal composition: no ∘_{i} of {}", describe_pair(*.left_dim, *.right_dim))]
    IllegalComposition {
        i: usize,
        left_dim: usize,
        right_dim: usize,
    },
    #[error("cells are not {i}-composable: target {target} differs from source {found}")]
    NotComposable {
        i: usize,
        target: String,
        found: String,
    },
    #[error("boundary dimension {requested} exceeds cell dimension {dim}")]
    DimensionOutOfRange { requested: usize, dim: usize },
    #[error("context does not fit: {0}")]
    ContextMismatch(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("generator name {0} is used in several dimensions; write it as name@dim")]
    AmbiguousGenerator(String),
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("invalid polygraph: {0}")]
    InvalidPolygraph(Report),
    #[error("invalid polygraph map: {0}")]
    InvalidMap(Report),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bound exceeded: {0}")]
    Bounds(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

fn describe_pair(k: usize, l: usize) -> String {
    if k == l {
        format!("two {k}-cells")
    } else {
        format!("a {k}-cell and a {l}-cell")
    }
}

impl Error {
    /// Input errors come from malformed data; everything else is a domain failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Input(_)
                | Error::InvalidPolygraph(_)
                | Error::InvalidMap(_)
                | Error::UnknownGenerator(_)
                | Error::AmbiguousGenerator(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::IllegalComposition { .. } => "illegal_composition",
            Error::NotComposable { .. } => "not_composable",
            Error::DimensionOutOfRange { .. } => "dimension_out_of_range",
            Error::ContextMismatch(_) => "context_mismatch",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::AmbiguousGenerator(_) => "ambiguous_generator",
            Error::Parse { .. } => "parse",
            Error::InvalidPolygraph(_) => "invalid_polygraph",
            Error::InvalidMap(_) => "invalid_map",
            Error::Input(_) => "input",
            Error::Precondition(_) => "precondition",
            Error::Bounds(_) => "bounds",
            Error::Internal(_) => "internal",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
