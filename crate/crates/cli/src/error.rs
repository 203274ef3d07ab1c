use ecdfclust_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Core(#[from] CoreError),

    /// Inputs are readable but not enough to run the requested stage.
    #[error("{0}")]
    Input(String),
}

impl PipelineError {
    /// 3 for filesystem failures, 2 for everything the user must fix in the data
    /// or arguments.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Core(e) if e.is_io() => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;
