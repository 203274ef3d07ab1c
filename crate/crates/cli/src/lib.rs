//! Pipeline stages and output rendering behind the `ecdfclust` binary.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod plot;
pub mod report;

pub use config::{PipelineConfig, DEFAULT_CLUSTERS};
pub use error::{PipelineError, Result};
