use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient mismatch: expected {expected} coefficients, got {got}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("unsupported ambient: {0}")]
    Unsupported(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("not an exceptional class: {0}")]
    NotExceptional(String),
    #[error("ambiguous blowdown: {0}")]
    AmbiguousBlowdown(String),
    #[error("basis normalization failed: {0}")]
    Normalization(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("reduction stuck: {0}")]
    Stuck(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("stage {stage}: {source}")]
    Stage { stage: String, source: Box<Error> },
}

impl Error {
    /// Wraps an error with the pipeline stage that raised it.
    pub fn at(stage: &str) -> impl FnOnce(Error) -> Error + '_ {
        move |e| match e {
            Error::Stage { .. } => e,
            e => Error::Stage {
                stage: stage.to_string(),
                source: Box::new(e),
            },
        }
    }

    /// Stage tag of a wrapped error.
    pub fn stage(&self) -> Option<&str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
