use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid corpus: {0}")]
    Validation(String),

    #[error("node {0} is not part of the graph or corpus")]
    UnknownNode(usize),

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("no seeds above threshold {threshold}")]
    NoSeedsAboveThreshold { threshold: u64 },

    #[error("seed list is empty")]
    EmptySeeds,

    #[error("duplicate seed node {0}")]
    DuplicateSeed(usize),

    #[error("seed node {0} has degree zero")]
    IsolatedSeed(usize),

    #[error("PageRank iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("no local conductance minimum in [{n_min}, {n_max}]; widen the search range")]
    NoLocalMinimum { n_min: usize, n_max: usize },

    #[error("ground-truth set is empty")]
    EmptyTruth,

    #[error("found set is empty")]
    EmptyFound,

    #[error("proportions sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("negative count {value} at position {index}")]
    NegativeCount { index: usize, value: i64 },

    #[error("block model spec field `{field}`: {message}")]
    Spec { field: String, message: String },
}

impl Error {
    pub fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            field: field.into(),
            message: message.into(),
        }
    }
}
