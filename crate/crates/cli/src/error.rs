use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{experiment}: no run reached the loss target {target} in {attempts} attempt(s) (best loss {best_loss})")]
    NonConvergence {
        experiment: String,
        attempts: usize,
        target: f64,
        best_loss: f64,
    },

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: qperceptron_core::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ExperimentError {
    /// 0 success, 2 configuration error, 3 non-convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use qperceptron_core::Error as Core;
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::NonConvergence { .. } => 3,
            ExperimentError::Core { source, .. } => match source {
                Core::InvalidConfig(_) | Core::UnknownName { .. } => 2,
                Core::Divergence { .. } => 3,
                _ => 1,
            },
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Attaches a context string to core errors.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T>;
}

impl<T> Context<T> for qperceptron_core::Result<T> {
    fn context(self, what: impl Into<String>) -> Result<T> {
        self.map_err(|source| ExperimentError::Core {
            context: what.into(),
            source,
        })
    }
}
