//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must live on the same grid do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A grid failed validation (too short, non-increasing, non-finite).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A caller-supplied parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation that needs samples received none.
    #[error("empty dataset")]
    EmptyDataset,

    /// A supervised operation was handed an unlabeled dataset.
    #[error("dataset has no labels: {0}")]
    MissingLabels(String),

    /// Classifier training needs at least two classes.
    #[error("training labels contain a single class")]
    SingleClass,

    /// The requested metric cannot be computed on the given labels.
    #[error("metric {metric} unsupported for {n_classes} classes")]
    UnsupportedMetric { metric: String, n_classes: usize },

    /// A file or blob failed structural validation.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
