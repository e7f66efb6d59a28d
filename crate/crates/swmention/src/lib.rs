//! File formats, configuration and pipeline stages around `swmention-core`.

pub mod config;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod manifest;
pub mod metadata;
pub mod pipeline;
pub mod raw;
pub mod tables;

pub use config::PipelineConfig;
pub use error::{Error, Result};
