use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is singular or nearly singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance {requested:.1e} (achieved {achieved:.3e})")]
    Accuracy { requested: f64, achieved: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("resolution limit: {0}")]
    Resolution(String),

    #[error("grid alignment: {0}")]
    Alignment(String),

    #[error("witness construction failed at level {level} (n = {n}): {reason}")]
    Construction { level: usize, n: u64, reason: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap this error with the name of the module or battery that raised it.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
