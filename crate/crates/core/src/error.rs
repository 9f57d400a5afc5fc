use thiserror::Error;

/// Failures raised by the numerical and channel routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("root not bracketed: g({low}) = {g_low}, g({high}) = {g_high}")]
    Bracket {
        low: f64,
        high: f64,
        g_low: f64,
        g_high: f64,
    },

    #[error("root finder exceeded {iterations} iterations (last bracket [{low}, {high}])")]
    RootConvergence { iterations: usize, low: f64, high: f64 },

    #[error("lagrange multiplier search failed: {0}")]
    Solver(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
