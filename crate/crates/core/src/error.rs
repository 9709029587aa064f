use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(
        "kernel floor violated: min over B(0, {delta0}) is {min_value:.6e}, not above eta = {eta:.6e}; \
         choose a smaller eta (below {min_value:.6e})"
    )]
    KernelFloor {
        delta0: f64,
        eta: f64,
        min_value: f64,
    },

    #[error("non-finite intermediate value in `{term}`")]
    NonFinite { term: &'static str },

    #[error("Mittag-Leffler E_{{{alpha},{beta}}}({z}) overflows f64")]
    MittagLefflerOverflow { alpha: f64, beta: f64, z: f64 },

    #[error("linear solve did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("{pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed snapshot: {reason}")]
    Snapshot { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
