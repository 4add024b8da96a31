//! Elastic shape analysis of functional data with explainable classification.
//!
//! The crate separates phase and amplitude variability of functional samples
//! through square-root velocity alignment, extracts uncorrelated features by
//! elastic functional PCA, trains a random forest on those features, and
//! explains the model with permutation feature importance.
//!
//! Modules follow the processing order:
//! - [`fdata`]: containers, smoothing, differentiation, the SRVF transform pair
//! - [`align`]: optimal warping, elastic distances, Karcher means
//! - [`efpca`]: vertical / horizontal / joint elastic functional PCA
//! - [`model`]: the classifier capability, random forest, performance metrics
//! - [`explain`]: permutation feature importance
//! - [`pipeline`]: end-to-end train/test orchestration, data generator,
//!   cross-sectional baseline, cross-validation
//! - [`io`]: CSV/JSON formats and pipeline-directory persistence

pub mod align;
pub mod efpca;
pub mod error;
pub mod explain;
pub mod fdata;
pub mod io;
pub mod model;
mod numerics;
pub mod pipeline;

pub use error::{Error, Result};
