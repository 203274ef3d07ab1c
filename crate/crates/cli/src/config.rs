use std::path::{Path, PathBuf};

use ecdfclust_core::MatchOptions;

use crate::error::{PipelineError, Result};

pub const DEFAULT_CLUSTERS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input_dir: PathBuf,
    pub out_dir: PathBuf,
    pub clusters: usize,
    pub match_options: MatchOptions,
    /// Precomputed similarities; bypasses embedding-based scoring.
    pub similarities: Option<PathBuf>,
    pub plot_width: f64,
    pub plot_height: f64,
}

impl PipelineConfig {
    pub fn new(input_dir: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            input_dir: input_dir.into(),
            out_dir: out_dir.into(),
            clusters: DEFAULT_CLUSTERS,
            match_options: MatchOptions::default(),
            similarities: None,
            plot_width: 480.0,
            plot_height: 360.0,
        }
    }

    pub fn with_clusters(mut self, m: usize) -> Self {
        self.clusters = m;
        self
    }

    pub fn with_similarities(mut self, path: impl Into<PathBuf>) -> Self {
        self.similarities = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 {
            return Err(PipelineError::Input("--clusters must be at least 1".into()));
        }
        if !(self.plot_width > 100.0 && self.plot_height > 100.0) {
            return Err(PipelineError::Input(
                "plot size must exceed 100 x 100".into(),
            ));
        }
        require_dir(&self.input_dir)?;
        if let Some(p) = &self.similarities {
            if !p.is_file() {
                return Err(not_found(p));
            }
        }
        Ok(())
    }

    pub fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

fn not_found(path: &Path) -> PipelineError {
    PipelineError::Core(ecdfclust_core::Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::NotFound, "not found"),
    })
}

fn require_dir(path: &Path) -> Result<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(not_found(path))
    }
}
