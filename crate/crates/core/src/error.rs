use thiserror::Error;

/// Failure modes shared by every module of the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    /// Caller violated a precondition (dimensions, ranges, guard band).
    #[error("usage error: {0}")]
    Usage(String),

    /// A series or iteration hit its cap before meeting its tolerance.
    #[error("{what} did not converge: last term norm {last_norm:.3e} after {terms} terms")]
    Convergence {
        what: String,
        last_norm: f64,
        terms: usize,
        trace: Vec<f64>,
    },

    /// A numerical route lost more accuracy than its threshold allows.
    #[error("{what}: accuracy residual {residual:.3e} exceeds {threshold:.3e}")]
    Accuracy {
        what: String,
        residual: f64,
        threshold: f64,
    },

    /// A shifted operator was numerically singular.
    #[error("singular operator: condition estimate {condition:.3e}")]
    Singular { condition: f64 },
}

impl LabError {
    pub fn usage(msg: impl Into<String>) -> Self {
        LabError::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
