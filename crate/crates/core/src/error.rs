use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a precondition.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// The quantum potential is undefined where the amplitude vanishes.
    #[error("amplitude vanishes at interior node {node} (r = {r}); quantum potential undefined")]
    Singularity { node: usize, r: f64 },

    #[error("operation not supported for {geometry} geometry: {reason}")]
    UnsupportedGeometry { geometry: &'static str, reason: String },

    #[error("eigenvalue bracket not found in [{lo}, {hi}]: {reason}")]
    BracketNotFound { lo: f64, hi: f64, reason: String },

    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },

    /// Integrator or estimator missed its accuracy target.
    #[error("numeric error: {detail} (achieved error estimate {estimate:e})")]
    Numeric { detail: String, estimate: f64 },

    #[error("probability leaked to the grid boundary at step {step}: edge mass {edge_mass:e}")]
    Leakage { step: usize, edge_mass: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    /// A sweep stopped at the first mass whose solve failed.
    #[error("sweep failed at mass {mass}: {source}")]
    Sweep { mass: f64, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. }
            | Error::Singularity { .. }
            | Error::UnsupportedGeometry { .. }
            | Error::Config(_)
            | Error::Leakage { .. }
            | Error::Io(_)
            | Error::Csv(_) => 2,
            Error::BracketNotFound { .. } | Error::NonConvergence { .. } | Error::Numeric { .. } => 3,
            Error::Sweep { source, .. } => source.exit_code(),
        }
    }
}

pub(crate) fn ensure_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(
            field,
            format!("must be finite and strictly positive, got {value}"),
        ))
    }
}
