use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Configuration rejected during validation; `field` is a dotted path.
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// An interaction law was evaluated at or below zero separation.
    #[error("singular interaction law at gap {gap:e}")]
    Singularity { gap: f64 },

    #[error("tangent degeneracy: |r'| = {norm:e} at element {element}, xi = {xi}")]
    DegenerateTangent { element: usize, xi: f64, norm: f64 },

    #[error("non-finite contribution from provider `{provider}`: {detail}")]
    NonFinite { provider: String, detail: String },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("singular tangent matrix (pivot {pivot} of {size})")]
    SingularTangent { pivot: usize, size: usize },

    #[error("relaxation did not reach a steady state within {steps} steps")]
    MaxTimeExceeded { steps: usize },

    #[error("reference force search failed: {0}")]
    RootBracket(String),

    /// Not even the first state of a sweep converged.
    #[error("no converged step: {0}")]
    NoConvergedStep(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("failed to parse {what}: {message}")]
    Parse { what: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Solver failures that a continuation step may recover from by cutting the step.
    pub fn is_recoverable(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::SingularTangent { .. }
                | Error::Singularity { .. }
                | Error::NonFinite { .. }
                | Error::DegenerateTangent { .. }
                | Error::MaxTimeExceeded { .. }
        )
    }
}
