use thiserror::Error;

/// Errors shared by all modules.
///
/// Validation *reports* (axiom violations in user data) are ordinary values,
/// not errors; `CoreError` covers malformed inputs and exhausted search
/// bounds only.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("input error: {0}")]
    Input(String),

    #[error("objects belong to different groupoids")]
    MismatchedGroupoid,

    #[error("functional is not a state: {0}")]
    NotAState(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("truncation depth {depth} exceeded while {context}")]
    DepthExceeded { depth: usize, context: String },
}

impl CoreError {
    pub fn input(msg: impl Into<String>) -> Self {
        CoreError::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        CoreError::Precondition(msg.into())
    }

    pub fn depth(depth: usize, context: impl Into<String>) -> Self {
        CoreError::DepthExceeded {
            depth,
            context: context.into(),
        }
    }
}
