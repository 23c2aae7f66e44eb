use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::Vec3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("facet {facet}: {reason}")]
    InvalidFacet { facet: usize, reason: String },

    #[error("edge {a} - {b} is shared by {} facets ({facets:?})", facets.len())]
    NonManifoldEdge { a: Vec3, b: Vec3, facets: Vec<usize> },

    #[error(
        "candidate enumeration for N = {facets} facets and K = {max_order} exceeds the budget of {budget} candidates"
    )]
    BudgetExceeded { facets: usize, max_order: usize, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scene file: {0}")]
    SceneParse(String),

    #[error("scene validation failed:\n  {}", .0.join("\n  "))]
    SceneValidation(Vec<String>),

    #[error("validity vector missing for cell {0}")]
    MissingVector(String),

    #[error("{path}: {message}")]
    Archive { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("png encoding: {0}")]
    Png(#[from] png::EncodingError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }

    /// Whether the error stems from user input (bad parameters, files) as
    /// opposed to an internal failure.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Png(_))
    }
}
